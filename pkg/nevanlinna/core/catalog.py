"""Ready-made measures and regions used by examples, scenes and tests."""

from __future__ import annotations

import math
from typing import Sequence

from nevanlinna.core.densities import BoxDensity, ConstantDensity
from nevanlinna.core.measure import (
    AffinePushforwardComponent,
    FullDensityComponent,
    HyperplaneLebesgueComponent,
    Measure,
    PointMassComponent,
)
from nevanlinna.core.regions import AffineImageRegion, BoxRegion, Region, StripRegion


def lebesgue(n: int, weight: float = 1.0) -> Measure:
    """``weight * Lebesgue(R^n)``; represents the constant ``weight * i``."""
    return Measure(n=n, components=(FullDensityComponent(n=n, density=ConstantDensity(), weight=weight),))


def point_mass(location: Sequence[float], weight: float = math.pi) -> Measure:
    n = len(location)
    return Measure(n=n, components=(PointMassComponent(n=n, location=tuple(location), weight=weight),))


def hyperplane(n: int, axis: int, offset: float = 0.0, constant: float = 1.0) -> Measure:
    """``constant * pi * Lebesgue`` on ``t_axis = offset``; represents ``constant / (offset - z_axis)``."""
    component = HyperplaneLebesgueComponent(n=n, axis=axis, offset=offset, constant=constant)
    return Measure(n=n, components=(component,))


def sum_plane(n: int) -> Measure:
    """``pi`` times the plane ``t_1 + .. + t_n = 0`` parametrized by its first ``n - 1`` coordinates.

    Represents ``-1 / (z_1 + .. + z_n)``.
    """
    if n < 2:
        raise ValueError("the sum plane needs n >= 2")
    rows = [tuple(1.0 if col == row else 0.0 for col in range(n - 1)) for row in range(n - 1)]
    rows.append((-1.0,) * (n - 1))
    component = AffinePushforwardComponent(
        n=n,
        k=n - 1,
        matrix=tuple(rows),
        offset=(0.0,) * n,
        weight=math.pi,
    )
    return Measure(n=n, components=(component,))


def anti_diagonal() -> Measure:
    """``pi`` times the line ``t_2 = -t_1``; represents ``-1 / (z_1 + z_2)``."""
    return sum_plane(2)


def line(slope: float, intercept: float = 0.0, weight: float = math.pi) -> Measure:
    """``weight`` times the line ``t_2 = slope * t_1 + intercept`` parametrized by ``t_1``."""
    component = AffinePushforwardComponent(
        n=2,
        k=1,
        matrix=((1.0,), (slope,)),
        offset=(0.0, intercept),
        weight=weight,
    )
    return Measure(n=2, components=(component,))


def diagonal(n: int = 2, weight: float = math.pi) -> Measure:
    component = AffinePushforwardComponent(n=n, k=1, matrix=((1.0,),) * n, offset=(0.0,) * n, weight=weight)
    return Measure(n=n, components=(component,))


def strip_lebesgue(
    slope: float,
    lower: float,
    upper: float,
    n: int = 2,
    first_axis: int = 1,
    second_axis: int = 2,
) -> Measure:
    """Lebesgue measure on ``lower < t_second - slope * t_first < upper``.

    Built as a pushforward of a box density so the quadrature sees smooth integrands.
    """
    if first_axis == second_axis:
        raise ValueError("strip axes must differ")
    matrix = [[1.0 if row == col else 0.0 for col in range(n)] for row in range(n)]
    matrix[second_axis - 1][first_axis - 1] = slope
    box_lower: list[float | None] = [None] * n
    box_upper: list[float | None] = [None] * n
    box_lower[second_axis - 1], box_upper[second_axis - 1] = lower, upper
    component = AffinePushforwardComponent(
        n=n,
        k=n,
        matrix=tuple(tuple(row) for row in matrix),
        offset=(0.0,) * n,
        density=BoxDensity(value=1.0, lower=tuple(box_lower), upper=tuple(box_upper)),
    )
    return Measure(n=n, components=(component,))


def region_lebesgue(region: Region, weight: float = 1.0) -> Measure:
    """Lebesgue measure restricted to ``region`` through an indicator."""
    component = FullDensityComponent(n=region.n, density=ConstantDensity(), region=region, weight=weight)
    return Measure(n=region.n, components=(component,))


def diagonal_region(n: int = 2) -> AffineImageRegion:
    matrix = tuple((1.0,) + (0.0,) * (n - 1) for _ in range(n))
    return AffineImageRegion(n=n, matrix=matrix, offset=(0.0,) * n)


def line_region(slope: float, intercept: float = 0.0) -> AffineImageRegion:
    return AffineImageRegion(n=2, matrix=((1.0, 0.0), (slope, 0.0)), offset=(0.0, intercept))


def sum_plane_region(n: int) -> AffineImageRegion:
    rows = [tuple(1.0 if col == row else 0.0 for col in range(n)) for row in range(n - 1)]
    rows.append(tuple(-1.0 if col < n - 1 else 0.0 for col in range(n)))
    return AffineImageRegion(n=n, matrix=tuple(rows), offset=(0.0,) * n)


def anti_diagonal_region() -> AffineImageRegion:
    return sum_plane_region(2)


def strip_region(slope: float, lower: float, upper: float, n: int = 2) -> StripRegion:
    return StripRegion(n=n, first_axis=1, second_axis=2, slope=slope, lower=lower, upper=upper)


def first_quadrant() -> BoxRegion:
    return BoxRegion(n=2, lower=(0.0, 0.0), upper=(None, None))


def whole_space(n: int) -> BoxRegion:
    return BoxRegion(n=n, lower=(None,) * n, upper=(None,) * n)
