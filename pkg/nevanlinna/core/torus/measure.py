"""Finite measures on the poly-torus ``[0, 2 pi)^n`` and their transport to ``R^n``."""

from __future__ import annotations

import math
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from nevanlinna.core.densities import BoxDensity, ConstantDensity
from nevanlinna.core.errors import ChartSeamError, NonLebesgueRestrictionError
from nevanlinna.core.log import LOGGER
from nevanlinna.core.measure import (
    FullDensityComponent,
    HyperplaneLebesgueComponent,
    Measure,
    MeasureComponent,
    PointMassComponent,
)
from nevanlinna.core.quadrature import Integrand, IntegrationResult, QuadratureEngine, QuadratureSpec
from nevanlinna.core.representation import RepresentationParams
from nevanlinna.core.torus.chart import (
    SHIFTS,
    TWO_PI,
    cayley,
    cayley_inverse,
    cayley_jacobian,
    inverse_jacobian_at,
    on_seam,
)
from nevanlinna.core.utils import check_axis

_SAME_ANGLE = 1e-12
_FULL_TURN = 1e-12


def _same_angle(a: float, b: float) -> bool:
    gap = abs(math.remainder(a - b, TWO_PI))
    return gap <= _SAME_ANGLE


def arc_exponential(m: int, lower: float, upper: float) -> complex:
    """``int_lower^upper e^{i m s} ds`` in closed form; a full turn with ``m != 0`` gives exactly 0."""
    if m == 0:
        return complex(upper - lower)
    if abs(upper - lower - TWO_PI) <= _FULL_TURN:
        return 0j
    return (np.exp(1j * m * upper) - np.exp(1j * m * lower)) / (1j * m)


def arc_kernel(w: complex, lower: float, upper: float) -> complex:
    """``int_lower^upper ds / (1 - w e^{-is})`` for ``|w| < 1`` in closed form."""
    start, end = np.exp(1j * lower) - w, np.exp(1j * upper) - w
    if abs(upper - lower - TWO_PI) <= _FULL_TURN:
        turn = TWO_PI
    else:
        turn = float(np.mod(np.angle(end / start), TWO_PI))
    return complex(turn, -math.log(abs(end) / abs(start)))


def disk_kernel_values(w: np.ndarray, points: np.ndarray) -> np.ndarray:
    return 2.0 * np.prod(1.0 / (1.0 - w * np.exp(-1j * points)), axis=-1) - 1.0


class _TorusComponentBase(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(ge=1)

    def integrate(self, h: Integrand, engine: QuadratureEngine) -> IntegrationResult:
        raise NotImplementedError

    def split(self, axis: int, p: float) -> tuple[float, TorusComponent | None]:
        """Return ``(d, rest)`` with the restriction to ``s_axis = p`` equal to ``d * Lebesgue``."""
        raise NotImplementedError

    def seam_conflict(self, shift: float) -> bool:
        raise NotImplementedError

    def to_plane(self, shift: float) -> list[MeasureComponent]:
        raise NotImplementedError

    def fourier(self, m: tuple[int, ...]) -> complex | None:
        """Closed form of ``int e^{i m.s}``, ``None`` when only quadrature applies."""
        return None

    def disk_kernel(self, w: np.ndarray) -> complex | None:
        """Closed form of the polydisk kernel integral, ``None`` when only quadrature applies."""
        return None

    def mass_divergence(self, eps: float, engine: QuadratureEngine) -> float:
        raise NotImplementedError


class TorusPointMass(_TorusComponentBase):
    kind: Literal["point_mass"] = "point_mass"
    location: tuple[float, ...]
    weight: float = Field(ge=0.0)

    @model_validator(mode="after")
    def _shape(self) -> TorusPointMass:
        if len(self.location) != self.n:
            raise ValueError("point_mass location must have n coordinates")
        if any(not 0.0 <= s < TWO_PI for s in self.location):
            raise ValueError("torus coordinates must lie in [0, 2 pi)")
        return self

    def integrate(self, h: Integrand, engine: QuadratureEngine) -> IntegrationResult:
        value = complex(np.asarray(h(np.asarray([self.location])), dtype=complex).reshape(-1)[0])
        return IntegrationResult.exact(self.weight * value)

    def split(self, axis: int, p: float) -> tuple[float, TorusComponent | None]:
        if not _same_angle(self.location[check_axis(axis, self.n)], p) or self.weight == 0.0:
            return 0.0, self
        if self.n == 1:
            return self.weight, None
        raise NonLebesgueRestrictionError(axis, p, "a point mass lies on the torus hyperplane")

    def seam_conflict(self, shift: float) -> bool:
        return bool(np.any(on_seam(np.asarray(self.location), shift)))

    def to_plane(self, shift: float) -> list[MeasureComponent]:
        location = np.asarray(self.location)
        weight = self.weight * float(np.prod(cayley_jacobian(location, shift)))
        point = tuple(float(t) for t in cayley(location, shift))
        return [PointMassComponent(n=self.n, location=point, weight=weight)]

    def fourier(self, m: tuple[int, ...]) -> complex | None:
        return self.weight * complex(np.exp(1j * np.dot(m, self.location)))

    def disk_kernel(self, w: np.ndarray) -> complex | None:
        return self.weight * complex(disk_kernel_values(w, np.asarray([self.location]))[0])

    def mass_divergence(self, eps: float, engine: QuadratureEngine) -> float:
        if min(self.location) < eps:
            return 0.0
        return self.weight * float(np.prod(np.asarray(self.location) ** -2.0))


class TorusHyperplane(_TorusComponentBase):
    """``constant * Lebesgue`` on ``s_axis = offset``."""

    kind: Literal["hyperplane_lebesgue"] = "hyperplane_lebesgue"
    axis: int = Field(ge=1)
    offset: float
    constant: float = Field(ge=0.0)

    @model_validator(mode="after")
    def _valid(self) -> TorusHyperplane:
        check_axis(self.axis, self.n)
        if not 0.0 <= self.offset < TWO_PI:
            raise ValueError("hyperplane offset must lie in [0, 2 pi)")
        return self

    def embed(self, points: np.ndarray) -> np.ndarray:
        return np.insert(points, self.axis - 1, self.offset, axis=1)

    def integrate(self, h: Integrand, engine: QuadratureEngine) -> IntegrationResult:
        free = self.n - 1
        result = engine.integrate_box(lambda u: h(self.embed(u)), np.zeros(free), np.full(free, TWO_PI))
        return result.scaled(self.constant)

    def split(self, axis: int, p: float) -> tuple[float, TorusComponent | None]:
        check_axis(axis, self.n)
        if axis == self.axis and _same_angle(self.offset, p):
            return self.constant, None
        return 0.0, self

    def seam_conflict(self, shift: float) -> bool:
        return bool(on_seam(self.offset, shift))

    def to_plane(self, shift: float) -> list[MeasureComponent]:
        constant = self.constant * cayley_jacobian(self.offset, shift) / math.pi
        offset = cayley(self.offset, shift)
        return [HyperplaneLebesgueComponent(n=self.n, axis=self.axis, offset=offset, constant=constant)]

    def fourier(self, m: tuple[int, ...]) -> complex | None:
        index = self.axis - 1
        value = self.constant * complex(np.exp(1j * m[index] * self.offset))
        for axis, entry in enumerate(m):
            if axis != index:
                value *= arc_exponential(entry, 0.0, TWO_PI)
        return value

    def disk_kernel(self, w: np.ndarray) -> complex | None:
        index = self.axis - 1
        others = TWO_PI ** (self.n - 1)
        pole = 1.0 / (1.0 - w[index] * np.exp(-1j * self.offset))
        return self.constant * others * complex(2.0 * pole - 1.0)

    def mass_divergence(self, eps: float, engine: QuadratureEngine) -> float:
        if self.offset < eps:
            return 0.0
        return self.constant * self.offset**-2 * (1.0 / eps - 1.0 / TWO_PI) ** (self.n - 1)


class TorusBoxDensity(_TorusComponentBase):
    """Constant ``value`` on the coordinate box ``[lower, upper]``, the whole torus by default."""

    kind: Literal["box_density"] = "box_density"
    value: float = Field(default=1.0, ge=0.0)
    lower: tuple[float, ...] | None = None
    upper: tuple[float, ...] | None = None

    @model_validator(mode="after")
    def _valid(self) -> TorusBoxDensity:
        lo, hi = self.bounds()
        if lo.size != self.n or hi.size != self.n:
            raise ValueError("box bounds must have n entries")
        if np.any(lo < 0.0) or np.any(hi > TWO_PI) or np.any(hi <= lo):
            raise ValueError("box bounds must satisfy 0 <= lower < upper <= 2 pi")
        return self

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.zeros(self.n) if self.lower is None else np.asarray(self.lower, dtype=float)
        hi = np.full(self.n, TWO_PI) if self.upper is None else np.asarray(self.upper, dtype=float)
        return lo, hi

    def integrate(self, h: Integrand, engine: QuadratureEngine) -> IntegrationResult:
        lo, hi = self.bounds()
        return engine.integrate_box(h, lo, hi).scaled(self.value)

    def split(self, axis: int, p: float) -> tuple[float, TorusComponent | None]:
        check_axis(axis, self.n)
        return 0.0, self

    def seam_conflict(self, shift: float) -> bool:
        lo, hi = self.bounds()
        for a, b in zip(lo + shift, hi + shift):
            crossing = (math.floor(a / TWO_PI + _SAME_ANGLE) + 1) * TWO_PI
            if crossing < b - _SAME_ANGLE:
                return True
        return False

    def to_plane(self, shift: float) -> list[MeasureComponent]:
        if self.seam_conflict(shift):
            raise ChartSeamError(f"box density crosses the seam of the chart with shift {shift:g}")
        lo, hi = self.bounds()
        lower = tuple(None if on_seam(a, shift) else float(cayley(a, shift)) for a in lo)
        upper = tuple(None if on_seam(b, shift) else float(cayley(b, shift)) for b in hi)
        if all(b is None for b in lower + upper):
            density: ConstantDensity | BoxDensity = ConstantDensity(value=self.value)
        else:
            density = BoxDensity(value=self.value, lower=lower, upper=upper)
        return [FullDensityComponent(n=self.n, density=density)]

    def fourier(self, m: tuple[int, ...]) -> complex | None:
        lo, hi = self.bounds()
        value = complex(self.value)
        for entry, a, b in zip(m, lo, hi):
            value *= arc_exponential(entry, float(a), float(b))
        return value

    def disk_kernel(self, w: np.ndarray) -> complex | None:
        lo, hi = self.bounds()
        product = complex(1.0)
        for coordinate, a, b in zip(w, lo, hi):
            product *= arc_kernel(complex(coordinate), float(a), float(b))
        return self.value * (2.0 * product - float(np.prod(hi - lo)))

    def mass_divergence(self, eps: float, engine: QuadratureEngine) -> float:
        lo, hi = self.bounds()
        total = self.value
        for a, b in zip(lo, hi):
            start = max(float(a), eps)
            if b <= start:
                return 0.0
            total *= 1.0 / start - 1.0 / float(b)
        return total


class TorusPulledBack(_TorusComponentBase):
    """A half-plane measure carried back to the torus through the chart with ``shift``.

    ``int h dnu = int h(Phi^-1(t)) prod 2 / (1 + t_l^2) dmu(t)``.
    """

    kind: Literal["pulled_back"] = "pulled_back"
    inner: Measure
    shift: float = 0.0

    @model_validator(mode="after")
    def _valid(self) -> TorusPulledBack:
        if self.inner.n != self.n:
            raise ValueError("pulled_back inner measure dimension mismatch")
        if self.shift not in SHIFTS:
            raise ValueError(f"chart shift must be one of {SHIFTS}")
        return self

    def compose(self, h: Integrand) -> Integrand:
        def composed(t: np.ndarray) -> np.ndarray:
            s = cayley_inverse(t, self.shift)
            return np.asarray(h(s), dtype=complex) * np.prod(inverse_jacobian_at(t), axis=-1)

        return composed

    def integrate(self, h: Integrand, engine: QuadratureEngine) -> IntegrationResult:
        return self.inner.integrate(self.compose(h), engine)

    def split(self, axis: int, p: float) -> tuple[float, TorusComponent | None]:
        check_axis(axis, self.n)
        if bool(on_seam(p, self.shift)):
            return 0.0, self
        constant, rest = self.inner.restrict(axis, cayley(p, self.shift))
        d = constant * math.pi / cayley_jacobian(p, self.shift)
        if rest.is_trivial:
            return d, None
        return d, self.model_copy(update={"inner": rest})

    def seam_conflict(self, shift: float) -> bool:
        return shift != self.shift

    def to_plane(self, shift: float) -> list[MeasureComponent]:
        if shift != self.shift:
            raise ChartSeamError(f"component was pulled back through the chart with shift {self.shift:g}")
        return list(self.inner.components)

    def mass_divergence(self, eps: float, engine: QuadratureEngine) -> float:
        def weight(s: np.ndarray) -> np.ndarray:
            inside = np.all(s >= eps, axis=-1)
            safe = np.where(s > 0.0, s, 1.0)
            return np.where(inside, np.prod(safe**-2.0, axis=-1), 0.0).astype(complex)

        result = self.integrate(weight, engine)
        return result.value.real if math.isfinite(abs(result.value)) else math.inf


TorusComponent = Annotated[
    Union[TorusPointMass, TorusHyperplane, TorusBoxDensity, TorusPulledBack],
    Field(discriminator="kind"),
]


class TorusMeasure(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(ge=1)
    components: tuple[TorusComponent, ...] = ()

    @model_validator(mode="after")
    def _dimensions(self) -> TorusMeasure:
        for component in self.components:
            if component.n != self.n:
                raise ValueError(f"component {component.kind} has dimension {component.n}, measure has {self.n}")
        return self

    @classmethod
    def lebesgue(cls, n: int, value: float = 1.0) -> TorusMeasure:
        return cls(n=n, components=(TorusBoxDensity(n=n, value=value),))

    @property
    def is_trivial(self) -> bool:
        return not self.components

    def __add__(self, other: TorusMeasure) -> TorusMeasure:
        if other.n != self.n:
            raise ValueError("cannot add measures of different dimension")
        return TorusMeasure(n=self.n, components=self.components + other.components)

    def integrate(self, h: Integrand, engine: QuadratureEngine) -> IntegrationResult:
        total = IntegrationResult.zero()
        for component in self.components:
            total = total + component.integrate(h, engine)
        return total

    def total_mass(self, spec: QuadratureSpec | None = None) -> IntegrationResult:
        return self.integrate(lambda s: np.ones(s.shape[0], dtype=complex), QuadratureEngine(spec))

    def restrict(self, axis: int, p: float) -> tuple[float, TorusMeasure]:
        d = 0.0
        rest: list[TorusComponent] = []
        for component in self.components:
            part, remainder = component.split(axis, p)
            d += part
            if remainder is not None:
                rest.append(remainder)
        return d, TorusMeasure(n=self.n, components=tuple(rest))


def choose_chart(nu: TorusMeasure) -> float:
    """The first chart shift whose seam carries no mass of ``nu``."""
    for shift in SHIFTS:
        if not any(component.seam_conflict(shift) for component in nu.components):
            if shift != SHIFTS[0]:
                LOGGER.info("using the shifted chart (shift %g)", shift)
            return shift
    raise ChartSeamError("every chart seam carries mass of the torus measure")


def transport(nu: TorusMeasure, shift: float | None = None) -> Measure:
    """Half-plane measure ``dmu(t) = prod |phi'(s_j)| dnu(s)`` with ``t = Phi(s)``."""
    chart = choose_chart(nu) if shift is None else shift
    for component in nu.components:
        if component.seam_conflict(chart):
            raise ChartSeamError(f"{component.kind} component touches the seam of the chart with shift {chart:g}")
    components = [part for component in nu.components for part in component.to_plane(chart)]
    return Measure(n=nu.n, components=tuple(components))


def _torus_component(component: MeasureComponent, shift: float) -> TorusComponent:
    n = component.n
    if isinstance(component, PointMassComponent):
        location = np.asarray(component.location)
        weight = component.weight * float(np.prod(inverse_jacobian_at(location)))
        return TorusPointMass(n=n, location=tuple(float(s) for s in cayley_inverse(location, shift)), weight=weight)
    if isinstance(component, HyperplaneLebesgueComponent):
        constant = component.constant * math.pi * float(inverse_jacobian_at(np.asarray(component.offset)))
        offset = cayley_inverse(component.offset, shift)
        return TorusHyperplane(n=n, axis=component.axis, offset=offset, constant=constant)
    if isinstance(component, FullDensityComponent) and component.region is None and shift == 0.0:
        density = component.density
        if isinstance(density, ConstantDensity):
            return TorusBoxDensity(n=n, value=component.weight * density.value)
        if isinstance(density, BoxDensity):
            lo, hi = density.bounds(n)
            lower = tuple(0.0 if math.isinf(a) else cayley_inverse(float(a)) for a in lo)
            upper = tuple(TWO_PI if math.isinf(b) else cayley_inverse(float(b)) for b in hi)
            return TorusBoxDensity(n=n, value=component.weight * density.value, lower=lower, upper=upper)
    return TorusPulledBack(n=n, inner=Measure(n=n, components=(component,)), shift=shift)


def inverse_transport(mu: Measure, shift: float = 0.0) -> TorusMeasure:
    """Torus measure ``dnu(s) = prod (1 - cos(s_j + shift)) dmu(Phi(s))``."""
    if shift not in SHIFTS:
        raise ValueError(f"chart shift must be one of {SHIFTS}")
    return TorusMeasure(n=mu.n, components=tuple(_torus_component(c, shift) for c in mu.components))


def torus_params(nu: TorusMeasure, imag_at_zero: float = 0.0, shift: float | None = None) -> RepresentationParams:
    """Half-plane representation of ``z -> i f(w(z))`` for the polydisk function of ``nu``."""
    return RepresentationParams(n=nu.n, a=-imag_at_zero, mu=transport(nu, shift))


def restrict_torus(nu: TorusMeasure, axis: int, p: float) -> tuple[float, TorusMeasure]:
    """Split off the restriction to ``s_axis = p``, which must be ``d * Lebesgue``."""
    check_axis(axis, nu.n)
    return nu.restrict(axis, p)


def torus_mass_divergence(nu: TorusMeasure, eps: float, spec: QuadratureSpec | None = None) -> float:
    """``int_{[eps, 2 pi)^n} prod s_j^-2 dnu``; unbounded as ``eps -> 0`` for nontrivial admissible ``nu``."""
    if not 0.0 < eps < math.pi:
        raise ValueError("eps must lie in (0, pi)")
    engine = QuadratureEngine(spec)
    return math.fsum(component.mass_divergence(eps, engine) for component in nu.components)
