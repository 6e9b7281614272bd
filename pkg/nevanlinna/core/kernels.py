"""Kernels of the integral representation on the poly-upper half-plane."""

from __future__ import annotations

from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from nevanlinna.core.utils import ComplexNumber, as_points, check_axis


class HalfPlanePoint(BaseModel):
    """A point of the poly-upper half-plane: every coordinate has positive imaginary part."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    z: tuple[ComplexNumber, ...]

    @model_validator(mode="after")
    def _upper(self) -> HalfPlanePoint:
        if not self.z:
            raise ValueError("a point needs at least one coordinate")
        if any(not value.imag > 0 for value in self.z):
            raise ValueError(f"every coordinate needs a positive imaginary part, got {self.z}")
        return self

    @classmethod
    def of(cls, *values: complex) -> HalfPlanePoint:
        return cls(z=tuple(complex(v) for v in values))

    @classmethod
    def diagonal(cls, n: int, value: complex = 1j) -> HalfPlanePoint:
        return cls(z=(complex(value),) * n)

    @property
    def n(self) -> int:
        return len(self.z)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.z, dtype=complex)

    def with_coordinate(self, axis: int, value: complex) -> HalfPlanePoint:
        index = check_axis(axis, self.n)
        return HalfPlanePoint(z=self.z[:index] + (complex(value),) + self.z[index + 1 :])


def kernel_values(z: HalfPlanePoint, t: np.ndarray) -> np.ndarray:
    """``K_n(z, t)`` for a batch of real points ``t`` of shape ``(m, n)``."""
    points = as_points(t, z.n)
    zeta = z.array
    shifted = 1.0 / (points - zeta) - 1.0 / (points + 1j)
    imaginary = 2j / (1.0 + points**2)
    scale = (2j) ** z.n
    return 1j * (2.0 / scale * np.prod(shifted, axis=-1) - 1.0 / scale * np.prod(imaginary, axis=-1))


def poisson_values(z: HalfPlanePoint, t: np.ndarray) -> np.ndarray:
    """Product Poisson kernel ``prod Im z / |t - z|^2``."""
    points = as_points(t, z.n)
    zeta = z.array
    return np.prod(zeta.imag / ((points - zeta.real) ** 2 + zeta.imag**2), axis=-1)


def remainder_values(z: HalfPlanePoint, t: np.ndarray) -> np.ndarray:
    return kernel_values(z, t).imag - poisson_values(z, t)


def kernel_K(z: HalfPlanePoint, t: Sequence[float]) -> complex:
    return complex(kernel_values(z, np.asarray(t, dtype=float))[0])


def poisson_P(z: HalfPlanePoint, t: Sequence[float]) -> float:
    return float(poisson_values(z, np.asarray(t, dtype=float))[0])


def remainder_R(z: HalfPlanePoint, t: Sequence[float]) -> float:
    return float(remainder_values(z, np.asarray(t, dtype=float))[0])


def nevanlinna_values(z: HalfPlanePoint, t: np.ndarray, first: int, second: int) -> np.ndarray:
    """Integrand of the Nevanlinna condition for the axis pair ``first < second``.

    The conjugate sits on the coordinate of ``second``.
    """
    points = as_points(t, z.n)
    zeta = z.array
    i, j = check_axis(first, z.n), check_axis(second, z.n)
    values = (points[:, i] - zeta[i]) ** -2 * (points[:, j] - np.conj(zeta[j])) ** -2
    for axis in range(z.n):
        if axis not in (i, j):
            values = values * (1.0 / (points[:, axis] - zeta[axis]) - 1.0 / (points[:, axis] - np.conj(zeta[axis])))
    return values
