"""The Cayley chart between the circle parameter ``s`` and the real line.

``phi(s) = i (1 + e^{i(s + shift)}) / (1 - e^{i(s + shift)}) = -cot((s + shift) / 2)``. The plain
chart has its seam at ``s = 0``; the shifted chart (``shift = 1``) moves the seam to ``2 pi - 1``.
"""

from __future__ import annotations

import math
from typing import TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from nevanlinna.core.errors import ChartSeamError
from nevanlinna.core.kernels import HalfPlanePoint
from nevanlinna.core.utils import ComplexNumber

TWO_PI = 2.0 * math.pi
SHIFTS = (0.0, 1.0)
SEAM_TOL = 1e-12

ArrayOrFloat = TypeVar("ArrayOrFloat", float, np.ndarray)


def seam(shift: float = 0.0) -> float:
    """Parameter value in ``[0, 2 pi)`` that the chart sends to infinity."""
    return float(np.mod(-shift, TWO_PI))


def on_seam(s: float | np.ndarray, shift: float = 0.0) -> np.ndarray:
    angle = np.mod(np.asarray(s, dtype=float) + shift, TWO_PI)
    return (angle <= SEAM_TOL) | (angle >= TWO_PI - SEAM_TOL)


def cayley(s: ArrayOrFloat, shift: float = 0.0) -> ArrayOrFloat:
    if np.any(on_seam(s, shift)):
        raise ChartSeamError(f"s = {s} lies on the chart seam {seam(shift):g}; use the shifted chart")
    half = 0.5 * (np.asarray(s, dtype=float) + shift)
    value = -np.cos(half) / np.sin(half)
    return float(value) if np.ndim(value) == 0 else value  # type: ignore[return-value]


def cayley_inverse(t: ArrayOrFloat, shift: float = 0.0) -> ArrayOrFloat:
    """Parameter in ``[0, 2 pi)`` mapped to ``t``; infinite ``t`` lands on the seam."""
    value = np.mod(math.pi + 2.0 * np.arctan(np.asarray(t, dtype=float)) - shift, TWO_PI)
    return float(value) if np.ndim(value) == 0 else value  # type: ignore[return-value]


def cayley_jacobian(s: ArrayOrFloat, shift: float = 0.0) -> ArrayOrFloat:
    """``|phi'(s)| = 1 / (1 - cos(s + shift))``."""
    if np.any(on_seam(s, shift)):
        raise ChartSeamError(f"the chart jacobian is infinite on the seam {seam(shift):g}")
    value = 1.0 / (1.0 - np.cos(np.asarray(s, dtype=float) + shift))
    return float(value) if np.ndim(value) == 0 else value  # type: ignore[return-value]


def inverse_jacobian_at(t: np.ndarray) -> np.ndarray:
    """``1 - cos(s + shift)`` expressed through ``t = phi(s)``; the same for every shift."""
    return 2.0 / (1.0 + t**2)


class DiskPoint(BaseModel):
    """A point of the open unit polydisk."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    w: tuple[ComplexNumber, ...]

    @model_validator(mode="after")
    def _inside(self) -> DiskPoint:
        if not self.w:
            raise ValueError("a point needs at least one coordinate")
        if any(not abs(value) < 1.0 for value in self.w):
            raise ValueError(f"every coordinate needs modulus below 1, got {self.w}")
        return self

    @classmethod
    def of(cls, *values: complex) -> DiskPoint:
        return cls(w=tuple(complex(v) for v in values))

    @property
    def n(self) -> int:
        return len(self.w)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.w, dtype=complex)


def cayley_point(z: HalfPlanePoint, shift: float = 0.0) -> DiskPoint:
    """``w = e^{-i shift} (z - i) / (z + i)`` coordinate-wise."""
    rotation = complex(math.cos(shift), -math.sin(shift))
    return DiskPoint(w=tuple(rotation * (value - 1j) / (value + 1j) for value in z.z))
