"""Symbolic candidate support sets in R^n.

Axis numbers are 1-based throughout, matching the coordinate names ``t1 .. tn``.
"""

from __future__ import annotations

from typing import Annotated, Literal, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from nevanlinna.core.utils import as_points


def _fmt(value: float) -> str:
    return f"{value:g}"


class _RegionBase(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(ge=1)

    def contains(self, points: Sequence[float] | np.ndarray, tol: float = 1e-9) -> np.ndarray:
        """Vectorized membership for points of shape ``(m, n)``."""
        raise NotImplementedError

    def describe(self, coordinates: Sequence[str] | None = None) -> str:
        raise NotImplementedError

    def box_bounds(self) -> tuple[np.ndarray, np.ndarray] | None:
        """Bounds of the region when it is a coordinate box, otherwise ``None``."""
        return None

    def _coordinates(self, coordinates: Sequence[str] | None) -> list[str]:
        return list(coordinates) if coordinates is not None else [f"t{axis}" for axis in range(1, self.n + 1)]


class AxisInterval(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    axis: int = Field(ge=1)
    lower: float
    upper: float

    @model_validator(mode="after")
    def _ordered(self) -> AxisInterval:
        if not self.lower < self.upper:
            raise ValueError("strip bounds must satisfy lower < upper")
        return self


class AxisPole(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    axis: int = Field(ge=1)
    pole: float = 0.0


class AffineImageRegion(_RegionBase):
    """The set ``{A s + beta : s in R^n}``."""

    kind: Literal["affine_image"] = "affine_image"
    matrix: tuple[tuple[float, ...], ...]
    offset: tuple[float, ...]

    @model_validator(mode="after")
    def _shape(self) -> AffineImageRegion:
        if len(self.matrix) != self.n or any(len(row) != self.n for row in self.matrix):
            raise ValueError("affine_image matrix must be n x n")
        if len(self.offset) != self.n:
            raise ValueError("affine_image offset must have n entries")
        return self

    @property
    def matrix_array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)

    @property
    def offset_array(self) -> np.ndarray:
        return np.asarray(self.offset, dtype=float)

    def contains(self, points: Sequence[float] | np.ndarray, tol: float = 1e-9) -> np.ndarray:
        pts = as_points(points, self.n) - self.offset_array
        matrix = self.matrix_array
        projected = pts @ (matrix @ np.linalg.pinv(matrix)).T
        residual = np.linalg.norm(pts - projected, axis=-1)
        return residual <= tol * np.maximum(1.0, np.linalg.norm(pts, axis=-1))

    def describe(self, coordinates: Sequence[str] | None = None) -> str:
        coords = self._coordinates(coordinates)
        rows = []
        for axis, (row, beta) in enumerate(zip(self.matrix, self.offset)):
            terms = [f"{_fmt(c)}*s{k + 1}" for k, c in enumerate(row) if c != 0.0]
            if beta != 0.0 or not terms:
                terms.append(_fmt(beta))
            rows.append(f"{coords[axis]} = {' + '.join(terms)}")
        return "{" + ", ".join(rows) + "}"


class StripRegion(_RegionBase):
    """The open strip ``lower < t_second - slope * t_first < upper``."""

    kind: Literal["strip"] = "strip"
    first_axis: int = Field(ge=1)
    second_axis: int = Field(ge=1)
    slope: float
    lower: float
    upper: float

    @model_validator(mode="after")
    def _valid(self) -> StripRegion:
        if self.first_axis == self.second_axis:
            raise ValueError("strip axes must differ")
        if max(self.first_axis, self.second_axis) > self.n:
            raise ValueError("strip axis outside dimension")
        if not self.lower < self.upper:
            raise ValueError("strip bounds must satisfy lower < upper")
        return self

    def contains(self, points: Sequence[float] | np.ndarray, tol: float = 1e-9) -> np.ndarray:
        pts = as_points(points, self.n)
        gap = pts[:, self.second_axis - 1] - self.slope * pts[:, self.first_axis - 1]
        return (gap > self.lower) & (gap < self.upper)

    def describe(self, coordinates: Sequence[str] | None = None) -> str:
        coords = self._coordinates(coordinates)
        first, second = coords[self.first_axis - 1], coords[self.second_axis - 1]
        term = first if self.slope == 1.0 else f"{_fmt(self.slope)}*{first}"
        return f"{{{_fmt(self.lower)} < {second} - {term} < {_fmt(self.upper)}}}"


class CrossComplementRegion(_RegionBase):
    """Complement of a union of open coordinate strips ``lower < t_axis < upper``."""

    kind: Literal["cross_complement"] = "cross_complement"
    strips: tuple[AxisInterval, ...]

    @model_validator(mode="after")
    def _axes(self) -> CrossComplementRegion:
        if any(strip.axis > self.n for strip in self.strips):
            raise ValueError("cross strip axis outside dimension")
        return self

    @property
    def covered_axes(self) -> set[int]:
        return {strip.axis for strip in self.strips}

    def contains(self, points: Sequence[float] | np.ndarray, tol: float = 1e-9) -> np.ndarray:
        pts = as_points(points, self.n)
        inside = np.ones(pts.shape[0], dtype=bool)
        for strip in self.strips:
            coordinate = pts[:, strip.axis - 1]
            inside &= ~((coordinate > strip.lower) & (coordinate < strip.upper))
        return inside

    def describe(self, coordinates: Sequence[str] | None = None) -> str:
        coords = self._coordinates(coordinates)
        parts = [f"{_fmt(s.lower)} < {coords[s.axis - 1]} < {_fmt(s.upper)}" for s in self.strips]
        return "complement of {" + " or ".join(parts) + "}"


class CoordinateAffineRegion(_RegionBase):
    """Intersection of the coordinate hyperplanes ``t_axis = offset``."""

    kind: Literal["coordinate_affine"] = "coordinate_affine"
    axes: tuple[int, ...]
    offsets: tuple[float, ...]

    @model_validator(mode="after")
    def _valid(self) -> CoordinateAffineRegion:
        if len(self.axes) != len(self.offsets) or not self.axes:
            raise ValueError("coordinate_affine needs one offset per axis")
        if len(set(self.axes)) != len(self.axes) or any(not 1 <= a <= self.n for a in self.axes):
            raise ValueError("coordinate_affine axes must be distinct and within 1..n")
        return self

    @property
    def codimension(self) -> int:
        return len(self.axes)

    def contains(self, points: Sequence[float] | np.ndarray, tol: float = 1e-9) -> np.ndarray:
        pts = as_points(points, self.n)
        inside = np.ones(pts.shape[0], dtype=bool)
        for axis, offset in zip(self.axes, self.offsets):
            inside &= np.abs(pts[:, axis - 1] - offset) <= tol * max(1.0, abs(offset))
        return inside

    def describe(self, coordinates: Sequence[str] | None = None) -> str:
        coords = self._coordinates(coordinates)
        return "{" + ", ".join(f"{coords[a - 1]} = {_fmt(p)}" for a, p in zip(self.axes, self.offsets)) + "}"


class BoxRegion(_RegionBase):
    """Coordinate box; ``None`` bounds are infinite."""

    kind: Literal["box"] = "box"
    lower: tuple[float | None, ...]
    upper: tuple[float | None, ...]
    closed: bool = True

    @model_validator(mode="after")
    def _valid(self) -> BoxRegion:
        if len(self.lower) != self.n or len(self.upper) != self.n:
            raise ValueError("box bounds must have n entries")
        lo, hi = self.box_bounds()
        if np.any(hi <= lo):
            raise ValueError("box bounds must satisfy lower < upper")
        return self

    def box_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.array([-np.inf if b is None else b for b in self.lower], dtype=float)
        hi = np.array([np.inf if b is None else b for b in self.upper], dtype=float)
        return lo, hi

    @property
    def is_whole_space(self) -> bool:
        return all(b is None for b in self.lower) and all(b is None for b in self.upper)

    def contains(self, points: Sequence[float] | np.ndarray, tol: float = 1e-9) -> np.ndarray:
        pts = as_points(points, self.n)
        lo, hi = self.box_bounds()
        if self.closed:
            return np.all((pts >= lo - tol) & (pts <= hi + tol), axis=-1)
        return np.all((pts > lo) & (pts < hi), axis=-1)

    def describe(self, coordinates: Sequence[str] | None = None) -> str:
        coords = self._coordinates(coordinates)
        sign = "<=" if self.closed else "<"
        parts = []
        for name, lo, hi in zip(coords, self.lower, self.upper):
            left = f"{_fmt(lo)} {sign} " if lo is not None else ""
            right = f" {sign} {_fmt(hi)}" if hi is not None else ""
            if left or right:
                parts.append(f"{left}{name}{right}")
        return "{" + ", ".join(parts) + "}" if parts else "R^" + str(self.n)


class HalfSpaceRegion(_RegionBase):
    """The closed half-space ``normal . t >= offset``."""

    kind: Literal["half_space"] = "half_space"
    normal: tuple[float, ...]
    offset: float = 0.0

    @model_validator(mode="after")
    def _valid(self) -> HalfSpaceRegion:
        if len(self.normal) != self.n or not any(self.normal):
            raise ValueError("half_space normal must be a nonzero vector with n entries")
        return self

    def contains(self, points: Sequence[float] | np.ndarray, tol: float = 1e-9) -> np.ndarray:
        pts = as_points(points, self.n)
        return pts @ np.asarray(self.normal, dtype=float) >= self.offset - tol

    def describe(self, coordinates: Sequence[str] | None = None) -> str:
        coords = self._coordinates(coordinates)
        terms = " + ".join(f"{_fmt(c)}*{name}" for c, name in zip(self.normal, coords) if c != 0.0)
        return f"{{{terms} >= {_fmt(self.offset)}}}"


class MoebiusImageRegion(_RegionBase):
    """Image of ``inner`` under coordinate maps applied in order.

    A point ``x`` lies in the image of ``U`` under the map on ``(axis, pole)`` when the point
    with ``x_axis`` replaced by ``pole - 1/x_axis`` lies in ``U``.
    """

    kind: Literal["moebius_image"] = "moebius_image"
    inner: Region
    maps: tuple[AxisPole, ...]

    @model_validator(mode="after")
    def _valid(self) -> MoebiusImageRegion:
        if self.inner.n != self.n:
            raise ValueError("moebius_image inner region dimension mismatch")
        if any(m.axis > self.n for m in self.maps):
            raise ValueError("moebius_image axis outside dimension")
        return self

    def pull_back(self, points: Sequence[float] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Map points back into the inner region's coordinates; second array flags valid rows."""
        pts = as_points(points, self.n).copy()
        valid = np.ones(pts.shape[0], dtype=bool)
        for move in reversed(self.maps):
            column = pts[:, move.axis - 1]
            nonzero = column != 0.0
            valid &= nonzero
            safe = np.where(nonzero, column, 1.0)
            pts[:, move.axis - 1] = np.where(nonzero, move.pole - 1.0 / safe, 0.0)
        return pts, valid

    def contains(self, points: Sequence[float] | np.ndarray, tol: float = 1e-9) -> np.ndarray:
        pulled, valid = self.pull_back(points)
        return valid & self.inner.contains(pulled, tol)

    def describe(self, coordinates: Sequence[str] | None = None) -> str:
        coords = self._coordinates(coordinates)
        for move in reversed(self.maps):
            current = coords[move.axis - 1]
            if move.pole == 0.0:
                coords[move.axis - 1] = f"(-1/{current})"
            else:
                coords[move.axis - 1] = f"({_fmt(move.pole)} - 1/{current})"
        return self.inner.describe(coords)


Region = Annotated[
    Union[
        AffineImageRegion,
        StripRegion,
        CrossComplementRegion,
        CoordinateAffineRegion,
        BoxRegion,
        HalfSpaceRegion,
        MoebiusImageRegion,
    ],
    Field(discriminator="kind"),
]

MoebiusImageRegion.model_rebuild()


def region_contains(region: Region, t: Sequence[float], tol: float = 1e-9) -> bool:
    return bool(region.contains(np.asarray(t, dtype=float), tol)[0])


def transform_region(region: Region, axis: int, pole: float = 0.0) -> MoebiusImageRegion:
    move = AxisPole(axis=axis, pole=pole)
    if isinstance(region, MoebiusImageRegion):
        return region.model_copy(update={"maps": region.maps + (move,)})
    return MoebiusImageRegion(n=region.n, inner=region, maps=(move,))
