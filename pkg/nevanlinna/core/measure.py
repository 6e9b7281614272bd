"""Positive Borel measures on R^n as finite sums of catalog components."""

from __future__ import annotations

import math
from dataclasses import replace
from typing import Annotated, Any, Literal, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from nevanlinna.core.densities import ConstantDensity, CustomDensity, Density
from nevanlinna.core.errors import (
    MeasurePreconditionError,
    MeasureSerializationError,
    NonLebesgueRestrictionError,
    UndecidableRestrictionError,
)
from nevanlinna.core.log import LOGGER
from nevanlinna.core.quadrature import (
    Integrand,
    IntegrationResult,
    QuadratureEngine,
    QuadratureSpec,
    TruncationPolicy,
)
from nevanlinna.core.regions import (
    AffineImageRegion,
    BoxRegion,
    CoordinateAffineRegion,
    Region,
    transform_region,
)
from nevanlinna.core.utils import check_axis

POLE_NUDGE = 1e-9
_SAME_POINT = 1e-12


def _same(a: float, b: float) -> bool:
    return abs(a - b) <= _SAME_POINT * max(1.0, abs(a), abs(b))


def _box_indicator(points: np.ndarray, radius: float) -> np.ndarray:
    return np.all(np.abs(points) <= radius, axis=-1).astype(float)


class _ComponentBase(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(ge=1)

    def integrate(self, f: Integrand, engine: QuadratureEngine) -> IntegrationResult:
        raise NotImplementedError

    def split(self, axis: int, pole: float) -> tuple[float, MeasureComponent | None]:
        """Return ``(c, rest)`` with the restriction to ``t_axis = pole`` equal to ``c * pi * Lebesgue``."""
        raise NotImplementedError

    def truncated_mass(self, radius: float, engine: QuadratureEngine) -> float:
        raise NotImplementedError

    def support_regions(self) -> list[Region]:
        raise NotImplementedError

    def scaled(self, factor: float) -> MeasureComponent:
        raise NotImplementedError

    def has_custom_density(self) -> bool:
        return False


class PointMassComponent(_ComponentBase):
    kind: Literal["point_mass"] = "point_mass"
    location: tuple[float, ...]
    weight: float = Field(ge=0.0)

    @model_validator(mode="after")
    def _shape(self) -> PointMassComponent:
        if len(self.location) != self.n:
            raise ValueError("point_mass location must have n coordinates")
        return self

    def integrate(self, f: Integrand, engine: QuadratureEngine) -> IntegrationResult:
        value = complex(np.asarray(f(np.asarray([self.location], dtype=float)), dtype=complex).reshape(-1)[0])
        return IntegrationResult.exact(self.weight * value)

    def split(self, axis: int, pole: float) -> tuple[float, MeasureComponent | None]:
        if not _same(self.location[check_axis(axis, self.n)], pole) or self.weight == 0.0:
            return 0.0, self
        if self.n == 1:
            return self.weight / math.pi, None
        raise NonLebesgueRestrictionError(axis, pole, "a point mass lies on the hyperplane")

    def truncated_mass(self, radius: float, engine: QuadratureEngine) -> float:
        return self.weight if max(abs(x) for x in self.location) <= radius else 0.0

    def support_regions(self) -> list[Region]:
        return [CoordinateAffineRegion(n=self.n, axes=tuple(range(1, self.n + 1)), offsets=self.location)]

    def scaled(self, factor: float) -> MeasureComponent:
        return self.model_copy(update={"weight": self.weight * factor})


class HyperplaneLebesgueComponent(_ComponentBase):
    """``constant * pi * Lebesgue`` on the hyperplane ``t_axis = offset``."""

    kind: Literal["hyperplane_lebesgue"] = "hyperplane_lebesgue"
    axis: int = Field(ge=1)
    offset: float
    constant: float = Field(ge=0.0)

    @model_validator(mode="after")
    def _axis(self) -> HyperplaneLebesgueComponent:
        check_axis(self.axis, self.n)
        return self

    def embed(self, points: np.ndarray) -> np.ndarray:
        return np.insert(points, self.axis - 1, self.offset, axis=1)

    def integrate(self, f: Integrand, engine: QuadratureEngine) -> IntegrationResult:
        free = self.n - 1
        result = engine.integrate_box(lambda u: f(self.embed(u)), np.full(free, -np.inf), np.full(free, np.inf))
        return result.scaled(self.constant * math.pi)

    def split(self, axis: int, pole: float) -> tuple[float, MeasureComponent | None]:
        check_axis(axis, self.n)
        if axis == self.axis and _same(self.offset, pole):
            return self.constant, None
        return 0.0, self

    def truncated_mass(self, radius: float, engine: QuadratureEngine) -> float:
        if abs(self.offset) > radius:
            return 0.0
        return self.constant * math.pi * (2.0 * radius) ** (self.n - 1)

    def support_regions(self) -> list[Region]:
        return [CoordinateAffineRegion(n=self.n, axes=(self.axis,), offsets=(self.offset,))]

    def scaled(self, factor: float) -> MeasureComponent:
        return self.model_copy(update={"constant": self.constant * factor})


class AffinePushforwardComponent(_ComponentBase):
    """``weight`` times the image of ``density * Lebesgue(R^k)`` under ``s -> M s + offset``."""

    kind: Literal["affine_pushforward"] = "affine_pushforward"
    k: int = Field(ge=1)
    matrix: tuple[tuple[float, ...], ...]
    offset: tuple[float, ...]
    density: Density = Field(default_factory=ConstantDensity)
    weight: float = Field(default=1.0, ge=0.0)

    @model_validator(mode="after")
    def _shape(self) -> AffinePushforwardComponent:
        if self.k > self.n:
            raise ValueError("affine_pushforward needs k <= n")
        if len(self.matrix) != self.n or any(len(row) != self.k for row in self.matrix):
            raise ValueError("affine_pushforward matrix must be n x k")
        if len(self.offset) != self.n:
            raise ValueError("affine_pushforward offset must have n entries")
        self.density.bounds(self.k)
        return self

    @property
    def matrix_array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)

    @property
    def offset_array(self) -> np.ndarray:
        return np.asarray(self.offset, dtype=float)

    def image(self, params: np.ndarray) -> np.ndarray:
        return params @ self.matrix_array.T + self.offset_array

    def integrate(self, f: Integrand, engine: QuadratureEngine) -> IntegrationResult:
        lower, upper = self.density.bounds(self.k)

        def pulled(params: np.ndarray) -> np.ndarray:
            return np.asarray(f(self.image(params)), dtype=complex) * self.density(params)

        return engine.integrate_box(pulled, lower, upper).scaled(self.weight)

    def split(self, axis: int, pole: float) -> tuple[float, MeasureComponent | None]:
        index = check_axis(axis, self.n)
        row = self.matrix_array[index]
        if np.any(row != 0.0) or not _same(self.offset[index], pole) or self.weight == 0.0:
            return 0.0, self
        if isinstance(self.density, CustomDensity):
            raise UndecidableRestrictionError(f"custom density concentrated on t_{axis} = {pole:g}")
        if self.n == 1:
            raise UndecidableRestrictionError("one-dimensional pushforward collapsed to a point")
        value = self.density.constant_value
        if value == 0.0:
            return 0.0, None
        reduced = np.delete(self.matrix_array, index, axis=0)
        if self.k != self.n - 1 or value is None:
            raise NonLebesgueRestrictionError(axis, pole, "concentrated pushforward is not a flat hyperplane density")
        determinant = abs(float(np.linalg.det(reduced)))
        if determinant <= 1e-14:
            raise NonLebesgueRestrictionError(axis, pole, "pushforward covers a lower-dimensional subset")
        return self.weight * value / (math.pi * determinant), None

    def truncated_mass(self, radius: float, engine: QuadratureEngine) -> float:
        lower, upper = self.density.bounds(self.k)
        if self.k == 1:
            lo, hi = float(lower[0]), float(upper[0])
            for slope, beta in zip(self.matrix_array[:, 0], self.offset):
                if slope == 0.0:
                    if abs(beta) > radius:
                        return 0.0
                    continue
                a, b = sorted(((-radius - beta) / slope, (radius - beta) / slope))
                lo, hi = max(lo, a), min(hi, b)
            if hi <= lo:
                return 0.0
            if math.isinf(lo) or math.isinf(hi):
                return math.inf
            result = engine.integrate_box(lambda s: self.density(s).astype(complex), [lo], [hi])
            return self.weight * result.value.real

        def inside(params: np.ndarray) -> np.ndarray:
            return self.density(params) * _box_indicator(self.image(params), radius)

        result = engine.integrate_box(inside, lower, upper)
        return self.weight * result.value.real if math.isfinite(abs(result.value)) else math.inf

    def support_regions(self) -> list[Region]:
        square = np.zeros((self.n, self.n))
        square[:, : self.k] = self.matrix_array
        return [
            AffineImageRegion(
                n=self.n,
                matrix=tuple(tuple(float(x) for x in row) for row in square),
                offset=self.offset,
            )
        ]

    def scaled(self, factor: float) -> MeasureComponent:
        return self.model_copy(update={"weight": self.weight * factor})

    def has_custom_density(self) -> bool:
        return isinstance(self.density, CustomDensity)


class FullDensityComponent(_ComponentBase):
    """``weight * density * Lebesgue(R^n)``, optionally restricted to a region."""

    kind: Literal["full_density"] = "full_density"
    density: Density = Field(default_factory=ConstantDensity)
    region: Region | None = None
    weight: float = Field(default=1.0, ge=0.0)

    @model_validator(mode="after")
    def _shape(self) -> FullDensityComponent:
        if self.region is not None and self.region.n != self.n:
            raise ValueError("full_density region dimension mismatch")
        self.density.bounds(self.n)
        return self

    def _domain(self) -> tuple[np.ndarray, np.ndarray, bool]:
        lower, upper = self.density.bounds(self.n)
        needs_indicator = False
        if self.region is not None:
            box = self.region.box_bounds()
            if box is None:
                needs_indicator = True
            else:
                lower, upper = np.maximum(lower, box[0]), np.minimum(upper, box[1])
        return lower, upper, needs_indicator

    def _weighting(self, points: np.ndarray, needs_indicator: bool) -> np.ndarray:
        values = self.density(points)
        if needs_indicator and self.region is not None:
            values = values * self.region.contains(points)
        return values

    def integrate(self, f: Integrand, engine: QuadratureEngine) -> IntegrationResult:
        lower, upper, needs_indicator = self._domain()

        def weighted(points: np.ndarray) -> np.ndarray:
            return np.asarray(f(points), dtype=complex) * self._weighting(points, needs_indicator)

        return engine.integrate_box(weighted, lower, upper).scaled(self.weight)

    def split(self, axis: int, pole: float) -> tuple[float, MeasureComponent | None]:
        check_axis(axis, self.n)
        return 0.0, self

    def truncated_mass(self, radius: float, engine: QuadratureEngine) -> float:
        lower, upper, needs_indicator = self._domain()
        lower, upper = np.maximum(lower, -radius), np.minimum(upper, radius)
        if np.any(upper <= lower):
            return 0.0
        value = self.density.constant_value
        if value is not None and not needs_indicator:
            return self.weight * value * float(np.prod(upper - lower))
        windowed = QuadratureEngine(replace(engine.spec, truncation=TruncationPolicy.WINDOWED, window=radius))
        result = windowed.integrate_box(lambda t: self._weighting(t, needs_indicator).astype(complex), lower, upper)
        return self.weight * result.value.real

    def support_regions(self) -> list[Region]:
        if self.region is not None:
            return [self.region]
        return [BoxRegion(n=self.n, lower=(None,) * self.n, upper=(None,) * self.n)]

    def scaled(self, factor: float) -> MeasureComponent:
        return self.model_copy(update={"weight": self.weight * factor})

    def has_custom_density(self) -> bool:
        return isinstance(self.density, CustomDensity)


class MoebiusPushforwardComponent(_ComponentBase):
    """Transport of ``inner`` by ``t_axis -> 1/(pole - t_axis)`` with weight ``(pole - t_axis)^-2``.

    The weight keeps Lebesgue measure invariant; ``inner`` carries no mass on ``t_axis = pole``.
    """

    kind: Literal["moebius_pushforward"] = "moebius_pushforward"
    inner: Measure
    axis: int = Field(ge=1)
    pole: float = 0.0

    @model_validator(mode="after")
    def _inner_avoids_pole(self) -> MoebiusPushforwardComponent:
        check_axis(self.axis, self.n)
        if self.inner.n != self.n:
            raise ValueError("moebius_pushforward inner measure dimension mismatch")
        try:
            constant, _ = self.inner.restrict(self.axis, self.pole)
        except NonLebesgueRestrictionError as exc:
            raise ValueError(f"inner measure charges t_{self.axis} = {self.pole:g}: {exc}") from exc
        except UndecidableRestrictionError:
            LOGGER.debug("moebius_pushforward: hyperplane mass of inner measure undecidable, accepted")
            return self
        if constant > 0.0:
            raise ValueError(f"inner measure charges t_{self.axis} = {self.pole:g} with constant {constant:g}")
        return self

    def compose(self, f: Integrand) -> Integrand:
        index = self.axis - 1

        def composed(points: np.ndarray) -> np.ndarray:
            gap = self.pole - points[:, index]
            gap = np.where(gap == 0.0, POLE_NUDGE, gap)
            moved = points.copy()
            moved[:, index] = 1.0 / gap
            return np.asarray(f(moved), dtype=complex) / gap**2

        return composed

    def integrate(self, f: Integrand, engine: QuadratureEngine) -> IntegrationResult:
        return self.inner.integrate(self.compose(f), engine)

    def split(self, axis: int, pole: float) -> tuple[float, MeasureComponent | None]:
        check_axis(axis, self.n)
        if axis != self.axis:
            constant, rest = self.inner.restrict(axis, pole)
        elif pole == 0.0:
            return 0.0, self
        else:
            constant, rest = self.inner.restrict(axis, self.pole - 1.0 / pole)
            constant *= pole**2
        if rest.is_trivial:
            return constant, None
        return constant, self.model_copy(update={"inner": rest})

    def truncated_mass(self, radius: float, engine: QuadratureEngine) -> float:
        result = self.integrate(lambda t: _box_indicator(t, radius).astype(complex), engine)
        return result.value.real if math.isfinite(abs(result.value)) else math.inf

    def support_regions(self) -> list[Region]:
        return [transform_region(region, self.axis, self.pole) for region in self.inner.support_regions()]

    def scaled(self, factor: float) -> MeasureComponent:
        return self.model_copy(update={"inner": self.inner.scaled(factor)})

    def has_custom_density(self) -> bool:
        return any(component.has_custom_density() for component in self.inner.components)


MeasureComponent = Annotated[
    Union[
        PointMassComponent,
        HyperplaneLebesgueComponent,
        AffinePushforwardComponent,
        FullDensityComponent,
        MoebiusPushforwardComponent,
    ],
    Field(discriminator="kind"),
]


class Measure(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(ge=1)
    components: tuple[MeasureComponent, ...] = ()

    @model_validator(mode="after")
    def _dimensions(self) -> Measure:
        for component in self.components:
            if component.n != self.n:
                raise ValueError(f"component {component.kind} has dimension {component.n}, measure has {self.n}")
        return self

    @classmethod
    def trivial(cls, n: int) -> Measure:
        return cls(n=n)

    @property
    def is_trivial(self) -> bool:
        return not self.components

    def __add__(self, other: Measure) -> Measure:
        if other.n != self.n:
            raise ValueError("cannot add measures of different dimension")
        return Measure(n=self.n, components=self.components + other.components)

    def scaled(self, factor: float) -> Measure:
        if factor < 0:
            raise ValueError("measures scale by nonnegative factors only")
        return Measure(n=self.n, components=tuple(c.scaled(factor) for c in self.components))

    def integrate(self, f: Integrand, engine: QuadratureEngine) -> IntegrationResult:
        total = IntegrationResult.zero()
        for component in self.components:
            total = total + component.integrate(f, engine)
        return total

    def restrict(self, axis: int, pole: float) -> tuple[float, Measure]:
        constant = 0.0
        rest: list[MeasureComponent] = []
        for component in self.components:
            part, remainder = component.split(axis, pole)
            constant += part
            if remainder is not None:
                rest.append(remainder)
        return constant, Measure(n=self.n, components=tuple(rest))

    def support_regions(self) -> list[Region]:
        return [region for component in self.components for region in component.support_regions()]

    def has_custom_density(self) -> bool:
        return any(component.has_custom_density() for component in self.components)


MoebiusPushforwardComponent.model_rebuild()
Measure.model_rebuild()


def integrate(f: Integrand, mu: Measure, spec: QuadratureSpec | None = None) -> IntegrationResult:
    return mu.integrate(f, QuadratureEngine(spec))


def growth_weight(points: np.ndarray) -> np.ndarray:
    return 1.0 / np.prod(1.0 + points**2, axis=-1)


def growth_integral(mu: Measure, spec: QuadratureSpec | None = None) -> IntegrationResult:
    """Integral of ``prod (1 + t^2)^-1``; a diverging estimate is reported as infinite."""
    spec = spec or QuadratureSpec()
    result = integrate(lambda t: growth_weight(t).astype(complex), mu, spec)
    if not result.converged and not (abs(result.value) <= spec.overflow_guard):
        LOGGER.warning("growth integral diverges (estimate %s)", result.value)
        return IntegrationResult(complex(math.inf), math.inf, False, result.evaluations)
    return result


def truncated_mass(mu: Measure, radius: float, spec: QuadratureSpec | None = None) -> float:
    """Mass of the cube ``[-radius, radius]^n``."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    engine = QuadratureEngine(spec or QuadratureSpec(abs_tol=1e-7, rel_tol=1e-7))
    return math.fsum(component.truncated_mass(radius, engine) for component in mu.components)


def restrict_to_hyperplane(mu: Measure, axis: int, pole: float) -> tuple[float, Measure]:
    """Split off the restriction to ``t_axis = pole``, which must be ``c * pi * Lebesgue``.

    Raises ``NonLebesgueRestrictionError`` when the concentrated part has another form and
    ``UndecidableRestrictionError`` when a component cannot be decided symbolically.
    """
    return mu.restrict(axis, pole)


def pushforward_moebius(mu: Measure, axis: int, pole: float = 0.0) -> Measure:
    """Transport ``mu`` by the coordinate map ``t_axis -> 1/(pole - t_axis)``."""
    check_axis(axis, mu.n)
    try:
        constant, _ = mu.restrict(axis, pole)
    except NonLebesgueRestrictionError as exc:
        raise MeasurePreconditionError(f"measure charges the pole hyperplane: {exc}") from exc
    except UndecidableRestrictionError as exc:
        raise MeasurePreconditionError(f"hyperplane mass at t_{axis} = {pole:g} is undecidable") from exc
    if constant > 0.0:
        raise MeasurePreconditionError(
            f"measure charges t_{axis} = {pole:g} with constant {constant:g}; split it off before transporting"
        )
    if mu.is_trivial:
        return mu
    return Measure(n=mu.n, components=(MoebiusPushforwardComponent(n=mu.n, inner=mu, axis=axis, pole=pole),))


def subspace_mass(mu: Measure, axes: Sequence[int], offsets: Sequence[float]) -> float:
    """Mass of the coordinate affine subspace ``{t_axes = offsets}`` from the components.

    Codimension one returns ``0`` or ``inf``; higher codimension only sees point masses and
    concentrated pushforwards, which a Nevanlinna measure cannot carry.
    """
    region = CoordinateAffineRegion(n=mu.n, axes=tuple(axes), offsets=tuple(offsets))
    if region.codimension == 1:
        constant, _ = mu.restrict(region.axes[0], region.offsets[0])
        if mu.n == 1:
            return math.pi * constant
        return math.inf if constant > 0 else 0.0
    total = 0.0
    for component in mu.components:
        if isinstance(component, PointMassComponent) and bool(region.contains(component.location)[0]):
            total += component.weight
        elif isinstance(component, HyperplaneLebesgueComponent | FullDensityComponent):
            continue
        else:
            raise MeasurePreconditionError(f"subspace mass of {component.kind} components is not symbolic")
    return total


def measure_to_json(mu: Measure) -> dict[str, Any]:
    if mu.has_custom_density():
        raise MeasureSerializationError("measures with custom densities have no JSON form")
    return mu.model_dump(mode="json")


def measure_from_json(document: dict[str, Any]) -> Measure:
    return Measure.model_validate(document)
