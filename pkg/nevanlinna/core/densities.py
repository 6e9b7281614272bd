"""Density catalog for absolutely continuous measure components."""

from __future__ import annotations

from typing import Annotated, Any, Callable, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class _DensityBase(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def bounds(self, dimension: int) -> tuple[np.ndarray, np.ndarray]:
        return np.full(dimension, -np.inf), np.full(dimension, np.inf)

    @property
    def constant_value(self) -> float | None:
        """The value when the density is constant on all of its parameter space."""
        return None

    def scaled(self, factor: float) -> Density:
        raise NotImplementedError


class ConstantDensity(_DensityBase):
    kind: Literal["constant"] = "constant"
    value: float = Field(default=1.0, ge=0.0)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return np.full(points.shape[0], self.value)

    @property
    def constant_value(self) -> float | None:
        return self.value

    def scaled(self, factor: float) -> Density:
        return ConstantDensity(value=self.value * factor)


class RationalDensity(_DensityBase):
    """``scale * prod (1 + s_k^2)^(-power)``; a negative power grows at infinity."""

    kind: Literal["rational"] = "rational"
    power: float
    scale: float = Field(default=1.0, ge=0.0)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.scale * np.prod((1.0 + points**2) ** (-self.power), axis=-1)

    @property
    def constant_value(self) -> float | None:
        return self.scale if self.power == 0.0 or self.scale == 0.0 else None

    def scaled(self, factor: float) -> Density:
        return RationalDensity(power=self.power, scale=self.scale * factor)


class BoxDensity(_DensityBase):
    """Constant ``value`` on a coordinate box of parameter space, zero elsewhere."""

    kind: Literal["box"] = "box"
    value: float = Field(default=1.0, ge=0.0)
    lower: tuple[float | None, ...]
    upper: tuple[float | None, ...]

    @model_validator(mode="after")
    def _valid(self) -> BoxDensity:
        if len(self.lower) != len(self.upper):
            raise ValueError("box density bounds differ in length")
        lo, hi = self.bounds(len(self.lower))
        if np.any(hi <= lo):
            raise ValueError("box density bounds must satisfy lower < upper")
        return self

    def __call__(self, points: np.ndarray) -> np.ndarray:
        lo, hi = self.bounds(points.shape[-1])
        inside = np.all((points >= lo) & (points <= hi), axis=-1)
        return np.where(inside, self.value, 0.0)

    def bounds(self, dimension: int) -> tuple[np.ndarray, np.ndarray]:
        if dimension != len(self.lower):
            raise ValueError(f"box density has {len(self.lower)} axes, parameter space has {dimension}")
        lo = np.array([-np.inf if b is None else b for b in self.lower], dtype=float)
        hi = np.array([np.inf if b is None else b for b in self.upper], dtype=float)
        return lo, hi

    @property
    def constant_value(self) -> float | None:
        unbounded = all(b is None for b in self.lower + self.upper)
        return self.value if unbounded or self.value == 0.0 else None

    def scaled(self, factor: float) -> Density:
        return self.model_copy(update={"value": self.value * factor})


class CustomDensity(_DensityBase):
    """Arbitrary nonnegative vectorized callable. Integrable, never serializable or restrictable."""

    kind: Literal["custom"] = "custom"
    function: Callable[[np.ndarray], Any]
    factor: float = Field(default=1.0, ge=0.0)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.factor * np.asarray(self.function(points), dtype=float).reshape(points.shape[0])

    def scaled(self, factor: float) -> Density:
        return self.model_copy(update={"factor": self.factor * factor})


Density = Annotated[
    Union[ConstantDensity, RationalDensity, BoxDensity, CustomDensity],
    Field(discriminator="kind"),
]
