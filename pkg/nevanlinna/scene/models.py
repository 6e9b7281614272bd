from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from nevanlinna.core.errors import SceneError
from nevanlinna.core.measure import Measure
from nevanlinna.core.regions import Region
from nevanlinna.core.representation import RepresentationParams
from nevanlinna.core.torus.curves import TorusRegion
from nevanlinna.core.torus.measure import TorusMeasure
from nevanlinna.core.utils import ComplexNumber

SCENE_VERSION = "1"

REQUIRED: dict[str, tuple[str, ...]] = {
    "eval": ("params", "measure"),
    "check": ("measure", "params"),
    "classify": ("region", "torus_region"),
    "transform": ("params", "measure"),
    "restrict": ("params", "measure"),
    "decompose": ("params", "measure"),
    "fourier": ("torus_measure",),
    "disk-eval": ("torus_measure",),
}


class SceneOptions(BaseModel):
    """Command arguments stored alongside the objects of a scene."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    points: tuple[tuple[ComplexNumber, ...], ...] = ()
    disk_points: tuple[tuple[ComplexNumber, ...], ...] = ()
    axis: int | None = Field(default=None, ge=1)
    pole: float = 0.0
    pairs: tuple[tuple[int, float], ...] = ()
    imag_at_zero: float = 0.0
    max_index: int = Field(default=4, ge=1)


class Scene(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    version: Literal["1"] = SCENE_VERSION
    n: int = Field(ge=1)
    params: RepresentationParams | None = None
    measure: Measure | None = None
    region: Region | None = None
    torus_region: TorusRegion | None = None
    torus_measure: TorusMeasure | None = None
    options: SceneOptions = Field(default_factory=SceneOptions)

    @model_validator(mode="after")
    def _dimensions(self) -> Scene:
        for name in ("params", "measure", "region", "torus_region", "torus_measure"):
            value = getattr(self, name)
            if value is not None and value.n != self.n:
                raise ValueError(f"{name} has dimension {value.n}, scene has {self.n}")
        if self.options.axis is not None and self.options.axis > self.n:
            raise ValueError(f"options.axis {self.options.axis} outside 1..{self.n}")
        return self

    def require(self, command: str) -> None:
        """Raise ``SceneError`` unless one of the objects ``command`` works on is present."""
        names = REQUIRED.get(command, ())
        if names and all(getattr(self, name) is None for name in names):
            raise SceneError(f"command {command!r} needs one of {', '.join(names)} in the scene")

    @property
    def representation(self) -> RepresentationParams:
        if self.params is not None:
            return self.params
        if self.measure is not None:
            return RepresentationParams.of_measure(self.measure)
        raise SceneError("the scene holds neither params nor a measure")

    @property
    def checked_measure(self) -> Measure:
        if self.measure is not None:
            return self.measure
        return self.representation.measure
