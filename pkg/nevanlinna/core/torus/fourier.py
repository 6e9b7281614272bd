"""Mixed Fourier coefficients and the polydisk integral representation."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from nevanlinna.core.errors import NonConvergenceError
from nevanlinna.core.log import LOGGER
from nevanlinna.core.quadrature import IntegrationResult, QuadratureEngine, QuadratureSpec
from nevanlinna.core.torus.chart import TWO_PI, DiskPoint
from nevanlinna.core.torus.measure import TorusMeasure, disk_kernel_values, restrict_torus
from nevanlinna.core.utils import ComplexNumber, check_axis, get_version


class FourierIndex(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    m: tuple[int, ...]

    @property
    def mixed(self) -> bool:
        """At least one positive and at least one negative entry."""
        return any(entry > 0 for entry in self.m) and any(entry < 0 for entry in self.m)

    @property
    def n(self) -> int:
        return len(self.m)


def mixed_indices(n: int, max_index: int) -> list[FourierIndex]:
    """Indices in ``[-max_index, max_index]^n`` with at least one positive and one negative entry."""
    indices = [FourierIndex(m=m) for m in product(range(-max_index, max_index + 1), repeat=n)]
    return [index for index in indices if index.mixed]


def mixed_fourier_coefficient(
    nu: TorusMeasure,
    m: FourierIndex | Sequence[int],
    spec: QuadratureSpec | None = None,
) -> IntegrationResult:
    """``int e^{i m.s} dnu``; closed forms where the component allows, quadrature otherwise."""
    index = m if isinstance(m, FourierIndex) else FourierIndex(m=tuple(m))
    if index.n != nu.n:
        raise ValueError(f"index has {index.n} entries, measure lives on a {nu.n}-torus")
    engine = QuadratureEngine(spec)
    exponents = np.asarray(index.m, dtype=float)
    total = IntegrationResult.zero()
    for component in nu.components:
        closed = component.fourier(index.m)
        if closed is not None:
            total = total + IntegrationResult.exact(closed)
        else:
            total = total + component.integrate(lambda s: np.exp(1j * (s @ exponents)), engine)
    return total


@dataclass(frozen=True, slots=True)
class FourierScan:
    max_index: int = 4
    tol: float = 1e-6
    workers: int = 1

    def __post_init__(self) -> None:
        if self.max_index < 1 or self.tol <= 0 or self.workers < 1:
            raise ValueError("max_index, tol and workers must be positive")


class FourierEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    m: tuple[int, ...]
    value: ComplexNumber
    error: float
    converged: bool


class FourierReport(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    version: str = Field(default_factory=get_version)
    n: int
    max_index: int
    total_mass: float
    threshold: float
    entries: tuple[FourierEntry, ...]
    max_mixed: float
    vanishing: bool
    converged: bool
    sampled: bool = True
    note: str = "only mixed indices up to max_index are scanned"


def scan_fourier(
    nu: TorusMeasure,
    scan: FourierScan | None = None,
    spec: QuadratureSpec | None = None,
) -> FourierReport:
    """Compute every mixed coefficient up to ``scan.max_index``.

    The measure counts as vanishing when the largest modulus stays within ``scan.tol * max(1, total mass)``.
    """
    scan = scan or FourierScan()
    if nu.n < 2:
        raise ValueError("mixed indices need n >= 2")
    mass = nu.total_mass(spec).value.real
    threshold = scan.tol * max(1.0, mass)
    indices = mixed_indices(nu.n, scan.max_index)

    def coefficient(index: FourierIndex) -> FourierEntry:
        result = mixed_fourier_coefficient(nu, index, spec)
        return FourierEntry(m=index.m, value=result.value, error=result.error, converged=result.converged)

    if scan.workers > 1:
        with ThreadPoolExecutor(max_workers=scan.workers) as executor:
            entries = tuple(executor.map(coefficient, indices))
    else:
        entries = tuple(coefficient(index) for index in indices)

    largest = max((abs(entry.value) for entry in entries), default=0.0)
    LOGGER.info("fourier scan over %d mixed indices: largest coefficient %.3e", len(entries), largest)
    return FourierReport(
        n=nu.n,
        max_index=scan.max_index,
        total_mass=mass,
        threshold=threshold,
        entries=entries,
        max_mixed=largest,
        vanishing=largest <= threshold,
        converged=all(entry.converged for entry in entries),
    )


def disk_evaluate_with_error(
    nu: TorusMeasure,
    imag_at_zero: float,
    w: DiskPoint,
    spec: QuadratureSpec | None = None,
) -> IntegrationResult:
    """``i imag_at_zero + (2 pi)^-n int (2 prod 1/(1 - w_l e^{-i s_l}) - 1) dnu``."""
    if w.n != nu.n:
        raise ValueError(f"point has {w.n} coordinates, measure lives on a {nu.n}-torus")
    engine = QuadratureEngine(spec)
    coordinates = w.array
    total = IntegrationResult.exact(1j * imag_at_zero, evaluations=0)
    scale = TWO_PI ** (-nu.n)
    for component in nu.components:
        closed = component.disk_kernel(coordinates)
        if closed is not None:
            part = IntegrationResult.exact(closed)
        else:
            part = component.integrate(lambda s: disk_kernel_values(coordinates, s), engine)
        total = total + part.scaled(scale)
    return total


def disk_evaluate(
    nu: TorusMeasure,
    imag_at_zero: float,
    w: DiskPoint,
    spec: QuadratureSpec | None = None,
) -> complex:
    """Polydisk value at ``w``; raises ``NonConvergenceError`` when the quadrature does not converge."""
    result = disk_evaluate_with_error(nu, imag_at_zero, w, spec)
    if not result.converged:
        raise NonConvergenceError(f"polydisk integral did not converge at {w.w} (error {result.error:.3e})")
    return result.value


class BlaschkeTerm(BaseModel):
    """``strength / (2 pi) * (e^{i location} + w_axis) / (e^{i location} - w_axis)``."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    axis: int = Field(ge=1)
    location: float
    strength: float = Field(ge=0.0)

    def evaluate(self, w: DiskPoint) -> complex:
        point = np.exp(1j * self.location)
        coordinate = w.w[check_axis(self.axis, w.n)]
        return self.strength / TWO_PI * complex((point + coordinate) / (point - coordinate))


def blaschke_decompose(
    nu: TorusMeasure,
    pairs: Sequence[tuple[int, float]],
) -> tuple[list[BlaschkeTerm], TorusMeasure]:
    """Split the torus hyperplane masses at ``pairs`` off ``nu``."""
    if len(set(pairs)) != len(pairs):
        raise ValueError("decomposition pairs must be distinct")
    remainder = nu
    terms: list[BlaschkeTerm] = []
    for axis, location in pairs:
        d, remainder = restrict_torus(remainder, axis, location)
        if d > 0.0:
            terms.append(BlaschkeTerm(axis=axis, location=location, strength=d))
    return terms, remainder


def evaluate_blaschke(
    terms: Sequence[BlaschkeTerm],
    remainder: TorusMeasure,
    imag_at_zero: float,
    w: DiskPoint,
    spec: QuadratureSpec | None = None,
) -> complex:
    """Sum of the Blaschke terms plus the polydisk value of the remainder, equal to ``disk_evaluate`` of the whole."""
    return sum((term.evaluate(w) for term in terms), 0j) + disk_evaluate(remainder, imag_at_zero, w, spec)

