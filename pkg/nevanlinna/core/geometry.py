"""Classification of candidate support regions of Nevanlinna measures.

Every verdict names the rule that produced it and cites the result behind the rule:

- ``coordinate-subspace-null`` (Coro 3.8): coordinate affine subspaces of codimension two or more carry no mass.
- ``hyperplane-lebesgue`` (Thm 3.4): inside a coordinate hyperplane the measure is a multiple of Lebesgue measure.
- ``positive-proportional-rows`` (Thm 3.11): an affine image with two rows proportional by a positive factor.
- ``positive-slope-strip`` (Thm 3.14): a strip of positive slope.
- ``coordinate-cross`` (Thm 3.23): the support misses one open coordinate strip per axis.
- ``moebius-transport`` (Coro 3.21): image of a forbidden affine image or strip under coordinate Moebius maps.
- ``admissible-catalog`` and ``one-variable`` (Thm 2.2): the example measure represents a known function.
"""

from __future__ import annotations

import math
from enum import Enum
from itertools import combinations
from typing import Sequence

import numpy as np
from numpy.random import default_rng
from pydantic import BaseModel, ConfigDict, model_validator

from nevanlinna.core import catalog
from nevanlinna.core.errors import WitnessConstructionError
from nevanlinna.core.kernels import HalfPlanePoint, nevanlinna_values
from nevanlinna.core.log import LOGGER
from nevanlinna.core.measure import Measure, pushforward_moebius
from nevanlinna.core.regions import (
    AffineImageRegion,
    AxisInterval,
    BoxRegion,
    CoordinateAffineRegion,
    CrossComplementRegion,
    MoebiusImageRegion,
    Region,
    StripRegion,
)
from nevanlinna.core.utils import check_axis

ROW_TOL = 1e-12
WITNESS_SAMPLES = 1000
WITNESS_SEED = 20240101


class VerdictStatus(str, Enum):
    FORBIDDEN = "forbidden"
    KNOWN_ADMISSIBLE = "known_admissible"
    UNDECIDED = "undecided"


class Rule(str, Enum):
    COORDINATE_SUBSPACE_NULL = "coordinate-subspace-null"
    HYPERPLANE_LEBESGUE = "hyperplane-lebesgue"
    POSITIVE_PROPORTIONAL_ROWS = "positive-proportional-rows"
    POSITIVE_SLOPE_STRIP = "positive-slope-strip"
    COORDINATE_CROSS = "coordinate-cross"
    MOEBIUS_TRANSPORT = "moebius-transport"
    ADMISSIBLE_CATALOG = "admissible-catalog"
    ONE_VARIABLE = "one-variable"


CITATIONS: dict[Rule, str] = {
    Rule.COORDINATE_SUBSPACE_NULL: "Coro 3.8",
    Rule.HYPERPLANE_LEBESGUE: "Thm 3.4",
    Rule.POSITIVE_PROPORTIONAL_ROWS: "Thm 3.11",
    Rule.POSITIVE_SLOPE_STRIP: "Thm 3.14",
    Rule.COORDINATE_CROSS: "Thm 3.23",
    Rule.MOEBIUS_TRANSPORT: "Coro 3.21",
    Rule.ADMISSIBLE_CATALOG: "Thm 2.2",
    Rule.ONE_VARIABLE: "Thm 2.2",
}
_WITNESSED = {Rule.POSITIVE_PROPORTIONAL_ROWS, Rule.POSITIVE_SLOPE_STRIP}
_TRANSPORTABLE = _WITNESSED | {Rule.MOEBIUS_TRANSPORT}


class Verdict(BaseModel):
    """Outcome of ``classify``; ``citation`` defaults to the citation of ``rule``."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    status: VerdictStatus
    rule: Rule | None = None
    citation: str = ""
    witness: HalfPlanePoint | None = None
    example: Measure | None = None
    notes: tuple[str, ...] = ()

    @model_validator(mode="before")
    @classmethod
    def _default_citation(cls, data: object) -> object:
        if isinstance(data, dict) and data.get("rule") is not None and not data.get("citation"):
            data = dict(data)
            data["citation"] = CITATIONS[Rule(data["rule"])]
        return data

    @model_validator(mode="after")
    def _cited(self) -> Verdict:
        if self.status is VerdictStatus.FORBIDDEN and (self.rule is None or not self.citation):
            raise ValueError("a forbidden verdict needs a rule and a citation")
        if self.rule is not None and self.rule in _WITNESSED and self.witness is None:
            raise ValueError(f"{self.rule.value} verdicts carry a witness point")
        return self

    @property
    def is_forbidden(self) -> bool:
        return self.status is VerdictStatus.FORBIDDEN


def _forbidden(rule: Rule, **kwargs: object) -> Verdict:
    return Verdict(status=VerdictStatus.FORBIDDEN, rule=rule, **kwargs)  # type: ignore[arg-type]


def _undecided(*notes: str) -> Verdict:
    return Verdict(status=VerdictStatus.UNDECIDED, notes=notes)


def proportional_factor(first: np.ndarray, second: np.ndarray, tol: float = ROW_TOL) -> float | None:
    """``gamma`` with ``second == gamma * first``, or ``None`` when the rows are not proportional."""
    norm = float(first @ first)
    if norm == 0.0:
        return None
    gamma = float(first @ second) / norm
    residual = float(np.linalg.norm(second - gamma * first))
    if residual > tol * max(float(np.linalg.norm(second)), 1.0):
        return None
    return gamma


def sigma_witness(
    matrix: Sequence[Sequence[float]],
    offset: Sequence[float],
    first: int,
    second: int,
    gamma: float,
) -> HalfPlanePoint:
    """Point where the Nevanlinna integrand is positive on ``{A s + beta}``.

    Row ``second`` of ``A`` must equal ``gamma`` times row ``first``.
    """
    if not gamma > 0:
        raise WitnessConstructionError(f"proportionality factor must be positive, got {gamma:g}")
    rows = np.asarray(matrix, dtype=float)
    n = rows.shape[0]
    i, j = check_axis(first, n), check_axis(second, n)
    if i == j:
        raise WitnessConstructionError("witness rows must differ")
    found = proportional_factor(rows[i], rows[j])
    if found is None or not math.isclose(found, gamma, rel_tol=1e-9, abs_tol=1e-12):
        raise WitnessConstructionError(f"row {second} is not {gamma:g} times row {first}")
    z = [1j] * n
    z[j] = complex(offset[j] - offset[i] * gamma, gamma)
    return HalfPlanePoint(z=tuple(z))


def _strip_samples(slope: float, lower: float, upper: float, count: int) -> tuple[np.ndarray, np.ndarray]:
    rng = default_rng(WITNESS_SEED)
    s1 = np.tan(rng.uniform(-0.499 * math.pi, 0.499 * math.pi, count))
    s2 = rng.uniform(-upper / 2.0, -lower / 2.0, count)
    return (s1 + s2) / slope, s1 - s2


def strip_witness(
    slope: float,
    lower: float,
    upper: float,
    first: int = 1,
    second: int = 2,
    n: int = 2,
) -> HalfPlanePoint:
    """Point where the Nevanlinna integrand has single-signed imaginary part on the strip.

    The strip is ``lower < t_second - slope * t_first < upper``. The sign is checked on
    sampled strip points before the point is returned.
    """
    if not slope > 0:
        raise WitnessConstructionError(f"strip slope must be positive, got {slope:g}")
    if not lower < upper:
        raise WitnessConstructionError("strip bounds must satisfy lower < upper")
    i, j = check_axis(first, n), check_axis(second, n)
    if i == j:
        raise WitnessConstructionError("strip axes must differ")

    x1, x2 = 0.0, max(upper, 0.0) + 1.0
    bound = x2**2 / 4.0 + max(s2 * (s2 + x2) for s2 in (-upper / 2.0, -lower / 2.0))
    y = 1.1 * math.sqrt(bound) * max(1.0, 1.0 / slope) if bound > 0 else 1.0

    coordinates = [1j] * n
    coordinates[i] = complex(x1, y / slope)
    coordinates[j] = complex(x2, y)
    witness = HalfPlanePoint(z=tuple(coordinates))

    t_first, t_second = _strip_samples(slope, lower, upper, WITNESS_SAMPLES)
    points = np.zeros((WITNESS_SAMPLES, n))
    points[:, i], points[:, j] = t_first, t_second
    a, b = (first, second) if first < second else (second, first)
    values = nevanlinna_values(witness, points, a, b) / (2j) ** (n - 2)
    imaginary = values.imag if first < second else -values.imag
    if not np.all(imaginary < 0):
        raise WitnessConstructionError("sampled integrand changes sign on the strip")
    LOGGER.debug("strip witness %s verified on %d samples", witness.z, WITNESS_SAMPLES)
    return witness


def same_affine_set(first: AffineImageRegion, second: AffineImageRegion, tol: float = 1e-9) -> bool:
    if first.n != second.n:
        return False
    a, b = first.matrix_array, second.matrix_array
    rank_a = np.linalg.matrix_rank(a, tol)
    if rank_a != np.linalg.matrix_rank(b, tol) or rank_a != np.linalg.matrix_rank(np.hstack([a, b]), tol):
        return False
    return bool(second.contains(first.offset_array, tol)[0])


def _catalog(region: Region) -> Verdict | None:
    if isinstance(region, AffineImageRegion) and region.n >= 2:
        if same_affine_set(region, catalog.sum_plane_region(region.n)):
            name = "anti-diagonal" if region.n == 2 else "sum plane"
            return Verdict(
                status=VerdictStatus.KNOWN_ADMISSIBLE,
                rule=Rule.ADMISSIBLE_CATALOG,
                example=catalog.sum_plane(region.n),
                notes=(f"{name} measure represents -1/(z1 + .. + z{region.n})",),
            )
    if isinstance(region, BoxRegion) and region.is_whole_space:
        return Verdict(
            status=VerdictStatus.KNOWN_ADMISSIBLE,
            rule=Rule.ADMISSIBLE_CATALOG,
            example=catalog.lebesgue(region.n),
            notes=("Lebesgue measure represents the constant i",),
        )
    return None


def _classify_coordinate(region: CoordinateAffineRegion) -> Verdict:
    if region.codimension >= 2:
        return _forbidden(Rule.COORDINATE_SUBSPACE_NULL)
    return Verdict(
        status=VerdictStatus.KNOWN_ADMISSIBLE,
        rule=Rule.HYPERPLANE_LEBESGUE,
        example=catalog.hyperplane(region.n, region.axes[0], region.offsets[0]),
    )


def _classify_affine(region: AffineImageRegion) -> Verdict:
    rows = region.matrix_array
    zero_rows = [axis for axis in range(region.n) if not np.any(rows[axis])]
    if zero_rows:
        axes = tuple(axis + 1 for axis in zero_rows)
        offsets = tuple(region.offset[axis] for axis in zero_rows)
        if len(zero_rows) >= 2:
            notes = (f"lies in {len(zero_rows)} coordinate hyperplanes",)
            return _forbidden(Rule.COORDINATE_SUBSPACE_NULL, notes=notes)
        if np.linalg.matrix_rank(rows) < region.n - 1:
            return _forbidden(Rule.HYPERPLANE_LEBESGUE, notes=("a proper subset of a coordinate hyperplane",))
        return _classify_coordinate(CoordinateAffineRegion(n=region.n, axes=axes, offsets=offsets))

    for first, second in combinations(range(region.n), 2):
        gamma = proportional_factor(rows[first], rows[second])
        if gamma is not None and gamma > 0:
            witness = sigma_witness(region.matrix, region.offset, first + 1, second + 1, gamma)
            return _forbidden(
                Rule.POSITIVE_PROPORTIONAL_ROWS,
                witness=witness,
                notes=(f"row {second + 1} = {gamma:g} * row {first + 1}",),
            )
    return _catalog(region) or _undecided("no positively proportional rows")


def _classify_strip(region: StripRegion) -> Verdict:
    if region.slope > 0:
        witness = strip_witness(
            region.slope, region.lower, region.upper, region.first_axis, region.second_axis, region.n
        )
        return _forbidden(Rule.POSITIVE_SLOPE_STRIP, witness=witness)
    return _undecided("strip slope is not positive")


def box_cross(region: BoxRegion) -> CrossComplementRegion | None:
    """A cross complement containing the box, when every axis has a finite bound."""
    strips = []
    for axis, (lo, hi) in enumerate(zip(region.lower, region.upper), start=1):
        if lo is not None:
            strips.append(AxisInterval(axis=axis, lower=lo - 2.0, upper=lo - 1.0))
        elif hi is not None:
            strips.append(AxisInterval(axis=axis, lower=hi + 1.0, upper=hi + 2.0))
        else:
            return None
    return CrossComplementRegion(n=region.n, strips=tuple(strips))


def _classify_moebius(region: MoebiusImageRegion) -> Verdict:
    inner = classify(region.inner)
    if inner.is_forbidden and inner.rule in _TRANSPORTABLE:
        conditions = tuple(f"requires mu restricted to t{m.axis} = {m.pole:g} to vanish" for m in region.maps)
        return _forbidden(Rule.MOEBIUS_TRANSPORT, notes=conditions + inner.notes)
    return _undecided("inner region is not forbidden by a transportable rule")


def classify(region: Region) -> Verdict:
    """Run the rule cascade on ``region``; the first matching rule decides."""
    if region.n == 1:
        return Verdict(
            status=VerdictStatus.KNOWN_ADMISSIBLE,
            rule=Rule.ONE_VARIABLE,
            notes=("every measure with finite growth integral is admissible for n = 1",),
        )
    if isinstance(region, CoordinateAffineRegion):
        return _classify_coordinate(region)
    if isinstance(region, AffineImageRegion):
        return _classify_affine(region)
    if isinstance(region, StripRegion):
        return _classify_strip(region)
    if isinstance(region, CrossComplementRegion):
        if region.covered_axes == set(range(1, region.n + 1)):
            return _forbidden(Rule.COORDINATE_CROSS)
        return _undecided("strips do not cover every axis")
    if isinstance(region, BoxRegion):
        if box_cross(region) is not None:
            return _forbidden(Rule.COORDINATE_CROSS, notes=("every axis of the box has a finite bound",))
        return _catalog(region) or _undecided("box is unbounded in both directions on some axis")
    if isinstance(region, MoebiusImageRegion):
        return _classify_moebius(region)
    return _undecided()


def cross_transport(mu: Measure, region: CrossComplementRegion) -> Measure:
    """Transport ``mu`` by the Moebius map centred in each strip of ``region``.

    When the support of ``mu`` avoids every strip the result has bounded support.
    """
    if region.n != mu.n:
        raise ValueError("region and measure dimensions differ")
    if region.covered_axes != set(range(1, region.n + 1)):
        raise ValueError("cross transport needs one strip per axis")
    transported = mu
    for axis in range(1, region.n + 1):
        strip = next(s for s in region.strips if s.axis == axis)
        transported = pushforward_moebius(transported, axis, 0.5 * (strip.lower + strip.upper))
    return transported
