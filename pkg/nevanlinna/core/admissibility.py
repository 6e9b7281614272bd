"""Numerical checks of the growth and Nevanlinna conditions on a measure."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from typing import Callable, Iterable, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from nevanlinna.core.kernels import HalfPlanePoint, nevanlinna_values, remainder_values
from nevanlinna.core.log import LOGGER
from nevanlinna.core.measure import Measure, growth_integral
from nevanlinna.core.quadrature import IntegrationResult, QuadratureEngine, QuadratureSpec
from nevanlinna.core.utils import ComplexNumber, get_version

T = TypeVar("T")
R = TypeVar("R")


class CheckVerdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, slots=True)
class GridSpec:
    coordinates: tuple[complex, ...] = (1j, 1 + 1j, -1 + 2j)
    pass_tol: float = 1e-5
    extra_points: tuple[tuple[complex, ...], ...] = ()
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.coordinates or any(c.imag <= 0 for c in self.coordinates):
            raise ValueError("grid coordinates must lie in the upper half-plane")
        if self.pass_tol <= 0 or self.workers < 1:
            raise ValueError("pass_tol and workers must be positive")

    def points(self, n: int) -> list[HalfPlanePoint]:
        grid = [HalfPlanePoint(z=tuple(values)) for values in product(self.coordinates, repeat=n)]
        extra = [HalfPlanePoint(z=tuple(values)) for values in self.extra_points if len(values) == n]
        return grid + extra


class ResidualEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    z: HalfPlanePoint
    first: int
    second: int
    value: ComplexNumber
    error: float
    converged: bool


class RemainderEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    z: HalfPlanePoint
    value: ComplexNumber
    error: float
    converged: bool


class ConditionReport(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    version: str = Field(default_factory=get_version)
    n: int
    growth: float
    growth_finite: bool
    growth_converged: bool
    threshold: float
    residuals: tuple[ResidualEntry, ...]
    remainders: tuple[RemainderEntry, ...]
    verdict: CheckVerdict
    max_residual: float
    max_remainder: float
    failing_points: tuple[HalfPlanePoint, ...]
    nevanlinna_violated: bool
    remainder_violated: bool
    sampled: bool = True
    note: str = "pass is evidence on a finite grid of points; fail certifies that the measure is not admissible"


def _map(function: Callable[[T], R], items: Iterable[T], workers: int) -> list[R]:
    if workers <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, items))


def nevanlinna_residual(
    mu: Measure,
    z: HalfPlanePoint,
    first: int,
    second: int,
    spec: QuadratureSpec | None = None,
) -> IntegrationResult:
    """Integral of the Nevanlinna-condition integrand for the axis pair ``first < second``."""
    if mu.n < 2:
        raise ValueError("the Nevanlinna condition needs n >= 2")
    if not 1 <= first < second <= mu.n:
        raise ValueError(f"axis pair must satisfy 1 <= first < second <= {mu.n}")
    return mu.integrate(lambda t: nevanlinna_values(z, t, first, second), QuadratureEngine(spec))


def remainder_integral(mu: Measure, z: HalfPlanePoint, spec: QuadratureSpec | None = None) -> IntegrationResult:
    return mu.integrate(lambda t: remainder_values(z, t).astype(complex), QuadratureEngine(spec))


def residue_identity_check(z: complex, spec: QuadratureSpec | None = None) -> IntegrationResult:
    """Numerically integrate ``(t - conj z)^-2`` over the real line; the exact value is 0."""
    if not z.imag > 0:
        raise ValueError("z must lie in the upper half-plane")
    conjugate = complex(z).conjugate()
    engine = QuadratureEngine(spec)
    return engine.integrate_box(lambda t: (t[:, 0] - conjugate) ** -2, [-np.inf], [np.inf])


def _state(value: complex, error: float, converged: bool, threshold: float) -> str:
    magnitude = abs(value)
    if math.isfinite(magnitude) and magnitude > threshold + error:
        return "violated"
    if converged and magnitude <= threshold:
        return "clean"
    return "unclear"


def check_measure(
    mu: Measure,
    grid: GridSpec | None = None,
    spec: QuadratureSpec | None = None,
) -> ConditionReport:
    grid = grid or GridSpec()
    growth = growth_integral(mu, spec)
    growth_value = growth.value.real
    growth_finite = math.isfinite(growth_value)
    threshold = grid.pass_tol * max(1.0, growth_value if growth_finite else 1.0)

    points = grid.points(mu.n)
    pairs = list(combinations(range(1, mu.n + 1), 2))

    def residuals_at(z: HalfPlanePoint) -> list[ResidualEntry]:
        entries = []
        for first, second in pairs:
            result = nevanlinna_residual(mu, z, first, second, spec)
            LOGGER.debug("residual at %s (%d,%d): %s +- %.2e", z.z, first, second, result.value, result.error)
            entries.append(
                ResidualEntry(
                    z=z,
                    first=first,
                    second=second,
                    value=result.value,
                    error=result.error,
                    converged=result.converged,
                )
            )
        return entries

    def remainder_at(z: HalfPlanePoint) -> RemainderEntry:
        result = remainder_integral(mu, z, spec)
        return RemainderEntry(z=z, value=result.value, error=result.error, converged=result.converged)

    residuals = tuple(entry for batch in _map(residuals_at, points, grid.workers) for entry in batch)
    remainders = tuple(_map(remainder_at, points, grid.workers))

    residual_states = [_state(e.value, e.error, e.converged, threshold) for e in residuals]
    remainder_states = [_state(e.value, e.error, e.converged, threshold) for e in remainders]

    failing: list[HalfPlanePoint] = []
    for entry, state in zip(residuals, residual_states):
        if state == "violated" and entry.z not in failing:
            failing.append(entry.z)
    for remainder_entry, state in zip(remainders, remainder_states):
        if state == "violated" and remainder_entry.z not in failing:
            failing.append(remainder_entry.z)

    states = residual_states + remainder_states
    if growth_value == math.inf or "violated" in states:
        verdict = CheckVerdict.FAIL
    elif not growth.converged or "unclear" in states:
        verdict = CheckVerdict.INCONCLUSIVE
    else:
        verdict = CheckVerdict.PASS
    LOGGER.info("check_measure: %s on %d grid points", verdict.value, len(points))

    def largest(values: Iterable[complex]) -> float:
        magnitudes = [abs(v) for v in values]
        return max(magnitudes) if magnitudes else 0.0

    return ConditionReport(
        n=mu.n,
        growth=growth_value,
        growth_finite=growth_finite,
        growth_converged=growth.converged,
        threshold=threshold,
        residuals=residuals,
        remainders=remainders,
        verdict=verdict,
        max_residual=largest(e.value for e in residuals),
        max_remainder=largest(e.value for e in remainders),
        failing_points=tuple(failing),
        nevanlinna_violated="violated" in residual_states,
        remainder_violated="violated" in remainder_states,
    )
