"""Half-plane regions seen on the poly-torus through the Cayley chart."""

from __future__ import annotations

import math
from typing import Literal, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from nevanlinna.core.errors import ChartSeamError
from nevanlinna.core.geometry import Verdict, classify
from nevanlinna.core.regions import Region
from nevanlinna.core.torus.chart import SHIFTS, on_seam
from nevanlinna.core.utils import as_points


def torus_curve(k: float, m: float, s1: float | np.ndarray) -> float | np.ndarray:
    """Image of the line ``t_2 = k t_1 + m``: ``s_2 = 2 arccot(k cot(s_1 / 2) - m)`` in ``(0, 2 pi)``."""
    if k == 0:
        raise ValueError("the slope k must be nonzero")
    if np.any(on_seam(s1)):
        raise ChartSeamError("s1 lies on the chart seam")
    half = 0.5 * np.asarray(s1, dtype=float)
    argument = k * np.cos(half) / np.sin(half) - m
    value = 2.0 * (0.5 * math.pi - np.arctan(argument))
    return float(value) if np.ndim(value) == 0 else value


class TorusRegion(BaseModel):
    """Preimage ``Phi^-1(inner)`` of a half-plane region; seam points are never members."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["torus_image"] = "torus_image"
    inner: Region
    shift: float = 0.0

    @model_validator(mode="after")
    def _valid(self) -> TorusRegion:
        if self.shift not in SHIFTS:
            raise ValueError(f"chart shift must be one of {SHIFTS}")
        return self

    @property
    def n(self) -> int:
        return self.inner.n

    def contains(self, points: Sequence[float] | np.ndarray, tol: float = 1e-9) -> np.ndarray:
        pts = as_points(points, self.n)
        seam = np.any(on_seam(pts, self.shift), axis=-1)
        half = 0.5 * (np.where(seam[:, None], math.pi, pts) + self.shift)
        mapped = -np.cos(half) / np.sin(half)
        return ~seam & self.inner.contains(mapped, tol)

    def describe(self, coordinates: Sequence[str] | None = None) -> str:
        names = list(coordinates) if coordinates is not None else [f"s{axis}" for axis in range(1, self.n + 1)]
        return f"Phi^-1({self.inner.describe([f'phi({name})' for name in names])})"


def torus_region(region: Region, shift: float = 0.0) -> TorusRegion:
    """Image of a half-plane region on the torus through the chart with the given shift."""
    return TorusRegion(inner=region, shift=shift)


class TorusVerdict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    region: TorusRegion
    verdict: Verdict
    notes: tuple[str, ...] = ()


def classify_torus(region: TorusRegion) -> TorusVerdict:
    """Lift the half-plane verdict of ``region.inner``; forbidden regions stay forbidden on the torus."""
    verdict = classify(region.inner)
    notes = ("lifted through the Cayley chart; the measure must not charge the chart seam",)
    lifted = verdict.model_copy(update={"example": None})
    if verdict.witness is not None:
        notes += ("the witness is a half-plane point for the transported measure",)
    return TorusVerdict(region=region, verdict=lifted, notes=notes)

