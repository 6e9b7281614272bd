"""Integral representation of Herglotz-Nevanlinna functions on the poly-upper half-plane."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from nevanlinna.core.errors import EstimationFailedError, NonConvergenceError
from nevanlinna.core.kernels import HalfPlanePoint, kernel_values
from nevanlinna.core.log import LOGGER
from nevanlinna.core.measure import (
    HyperplaneLebesgueComponent,
    Measure,
    pushforward_moebius,
    restrict_to_hyperplane,
)
from nevanlinna.core.quadrature import IntegrationResult, QuadratureEngine, QuadratureSpec
from nevanlinna.core.utils import check_axis


class RepresentationParams(BaseModel):
    """``q(z) = a + sum b_l z_l + pi^-n * integral K_n(z, t) dmu(t)``."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(ge=1)
    a: float = 0.0
    b: tuple[float, ...] = ()
    mu: Measure | None = None

    @model_validator(mode="before")
    @classmethod
    def _defaults(cls, data: object) -> object:
        if isinstance(data, dict) and "n" in data:
            data = dict(data)
            data.setdefault("b", (0.0,) * int(data["n"]))
            if data.get("mu") is None:
                data["mu"] = {"n": int(data["n"]), "components": []}
        return data

    @model_validator(mode="after")
    def _valid(self) -> RepresentationParams:
        if len(self.b) != self.n:
            raise ValueError("b must have n entries")
        if any(value < 0 for value in self.b):
            raise ValueError("b entries must be nonnegative")
        if self.measure.n != self.n:
            raise ValueError("measure dimension differs from n")
        return self

    @property
    def measure(self) -> Measure:
        return self.mu if self.mu is not None else Measure.trivial(self.n)

    @classmethod
    def of_measure(cls, mu: Measure) -> RepresentationParams:
        return cls(n=mu.n, mu=mu)


class PoleTerm(BaseModel):
    """The summand ``strength / (location - z_axis)``."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    axis: int = Field(ge=1)
    location: float
    strength: float = Field(ge=0.0)

    def evaluate(self, z: HalfPlanePoint) -> complex:
        return self.strength / (self.location - z.z[check_axis(self.axis, z.n)])


@dataclass(frozen=True, slots=True)
class LimitSpec:
    eps0: float = 0.25
    levels: int = 8
    residual_tol: float = 1e-4
    fixed_imag: float = 1.0

    def __post_init__(self) -> None:
        if self.eps0 <= 0 or self.fixed_imag <= 0 or self.residual_tol <= 0:
            raise ValueError("limit path parameters must be positive")
        if self.levels < 3:
            raise ValueError("at least three path levels are needed for extrapolation")


@dataclass(frozen=True, slots=True)
class LimitEstimate:
    value: float
    raw: complex
    residual: float
    samples: tuple[complex, ...]


@dataclass(frozen=True, slots=True)
class TransformedRepresentation:
    """Representation of ``z -> q(.., pole - 1/z_axis, ..)`` with the linear data that moved."""

    params: RepresentationParams
    axis: int
    pole: float
    slope: float
    pole_strength: float


def _coerce(target: RepresentationParams | Measure) -> RepresentationParams:
    return target if isinstance(target, RepresentationParams) else RepresentationParams.of_measure(target)


def integral_part(mu: Measure, z: HalfPlanePoint, engine: QuadratureEngine) -> IntegrationResult:
    if mu.n != z.n:
        raise ValueError(f"point has {z.n} coordinates, measure lives on R^{mu.n}")
    return mu.integrate(lambda t: kernel_values(z, t), engine).scaled(math.pi ** (-mu.n))


def evaluate_with_error(
    params: RepresentationParams,
    z: HalfPlanePoint,
    spec: QuadratureSpec | None = None,
) -> IntegrationResult:
    linear = params.a + complex(np.dot(np.asarray(params.b), z.array))
    return integral_part(params.measure, z, QuadratureEngine(spec)) + IntegrationResult.exact(linear, evaluations=0)


def evaluate(params: RepresentationParams, z: HalfPlanePoint, spec: QuadratureSpec | None = None) -> complex:
    result = evaluate_with_error(params, z, spec)
    if not result.converged:
        raise NonConvergenceError(f"representation integral did not converge at {z.z} (error {result.error:.3e})")
    return result.value


def nontangential_c(
    target: RepresentationParams | Measure,
    axis: int,
    pole: float,
    limit: LimitSpec | None = None,
    spec: QuadratureSpec | None = None,
) -> LimitEstimate:
    """Estimate ``lim (pole - z_axis) q(z)`` along the vertical path ``z_axis = pole + i eps``."""
    params = _coerce(target)
    limit = limit or LimitSpec()
    index = check_axis(axis, params.n)
    base = [complex(0.0, limit.fixed_imag)] * params.n

    samples = []
    for level in range(limit.levels):
        eps = limit.eps0 * 2.0**-level
        coordinates = list(base)
        coordinates[index] = complex(pole, eps)
        result = evaluate_with_error(params, HalfPlanePoint(z=tuple(coordinates)), spec)
        if not result.converged:
            LOGGER.warning("non-tangential sample at eps=%.3e did not converge", eps)
        samples.append(-1j * eps * result.value)

    extrapolated = [2.0 * samples[k + 1] - samples[k] for k in range(len(samples) - 1)]
    raw = extrapolated[-1]
    residual = abs(extrapolated[-1] - extrapolated[-2])
    if not residual <= limit.residual_tol:
        raise EstimationFailedError(
            f"limit along t_{axis} -> {pole:g} did not settle: residual {residual:.3e} > {limit.residual_tol:.1e}"
        )
    return LimitEstimate(value=max(raw.real, 0.0), raw=raw, residual=residual, samples=tuple(samples))


def decompose(
    params: RepresentationParams,
    pairs: Sequence[tuple[int, float]],
) -> tuple[list[PoleTerm], RepresentationParams]:
    """Split the hyperplane poles at ``pairs`` off the representation."""
    if len(set(pairs)) != len(pairs):
        raise ValueError("decomposition pairs must be distinct")
    remainder = params.measure
    poles: list[PoleTerm] = []
    shift = 0.0
    for axis, location in pairs:
        constant, remainder = restrict_to_hyperplane(remainder, axis, location)
        if constant > 0.0:
            poles.append(PoleTerm(axis=axis, location=location, strength=constant))
            shift += constant * location / (1.0 + location**2)
    adjusted = RepresentationParams(n=params.n, a=params.a - shift, b=params.b, mu=remainder)
    return poles, adjusted


def evaluate_decomposition(
    poles: Sequence[PoleTerm],
    adjusted: RepresentationParams,
    z: HalfPlanePoint,
    spec: QuadratureSpec | None = None,
) -> complex:
    return sum((pole.evaluate(z) for pole in poles), 0j) + evaluate(adjusted, z, spec)


def transform_representation(
    params: RepresentationParams,
    axis: int,
    pole: float = 0.0,
    spec: QuadratureSpec | None = None,
) -> TransformedRepresentation:
    """Representation of ``Q(z) = q(z_1, .., pole - 1/z_axis, .., z_n)``.

    The hyperplane mass at ``t_axis = pole`` turns into the slope on ``z_axis``, the old slope
    turns into a pole at 0 and the remaining measure is transported coordinate-wise.
    """
    index = check_axis(axis, params.n)
    slope, remainder = restrict_to_hyperplane(params.measure, axis, pole)
    strength = params.b[index]

    transported = pushforward_moebius(remainder, axis, pole)
    if strength > 0.0:
        hyperplane = HyperplaneLebesgueComponent(n=params.n, axis=axis, offset=0.0, constant=strength)
        transported = transported + Measure(n=params.n, components=(hyperplane,))

    a = params.a - slope * pole / (1.0 + pole**2) + strength * pole
    if pole != 0.0 and not remainder.is_trivial:
        a += _translation_constant(remainder, pushforward_moebius(remainder, axis, pole), axis, pole, spec)

    b = tuple(slope if k == index else value for k, value in enumerate(params.b))
    result = RepresentationParams(n=params.n, a=a, b=b, mu=transported)
    return TransformedRepresentation(params=result, axis=axis, pole=pole, slope=slope, pole_strength=strength)


def _translation_constant(
    original: Measure,
    transported: Measure,
    axis: int,
    pole: float,
    spec: QuadratureSpec | None,
) -> float:
    """Real constant separating the two integral parts when the map also translates."""
    engine = QuadratureEngine(spec)
    centre = HalfPlanePoint.diagonal(original.n)
    moved = centre.with_coordinate(axis, complex(pole, 1.0))
    before = integral_part(original, moved, engine)
    after = integral_part(transported, centre, engine)
    if not (before.converged and after.converged):
        LOGGER.warning("translation constant for pole %g computed from unconverged integrals", pole)
    return (before.value - after.value).real


def variable_dependence(params: RepresentationParams, axis: int) -> bool | None:
    """``True`` when hyperplane mass at ``t_axis = 0`` proves that q depends on ``z_axis``.

    ``None`` means undetermined: ``-1/(z1 + z2)`` depends on both variables without such mass.
    """
    if params.b[check_axis(axis, params.n)] > 0.0:
        return True
    constant, _ = restrict_to_hyperplane(params.measure, axis, 0.0)
    return True if constant > 0.0 else None
