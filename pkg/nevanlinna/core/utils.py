from __future__ import annotations

import importlib.metadata
from functools import cache
from pathlib import Path
from typing import Annotated, Any, Sequence

import numpy as np
from pydantic import BeforeValidator, PlainSerializer, WithJsonSchema


def parse_complex(value: Any) -> complex:
    """Read a complex number from a number, a ``[re, im]`` pair or a string like ``"1+2i"``."""
    if isinstance(value, bool):
        raise ValueError("booleans are not complex numbers")
    if isinstance(value, (int, float, complex, np.number)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        text = value.strip().replace(" ", "").replace("I", "i").replace("i", "j")
        try:
            return complex(text)
        except ValueError as exc:
            raise ValueError(f"cannot read complex number from {value!r}") from exc
    raise ValueError(f"cannot read complex number from {value!r}")


def dump_complex(value: complex) -> list[float]:
    return [float(value.real), float(value.imag)]


ComplexNumber = Annotated[
    complex,
    BeforeValidator(parse_complex),
    PlainSerializer(dump_complex, return_type=list),
    WithJsonSchema({"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}),
]


def format_complex(value: complex, digits: int = 10) -> str:
    """Render ``value`` as ``re+imi``; parts negligible against the modulus print as 0."""
    scale = max(1.0, abs(value))
    re = 0.0 if abs(value.real) < 1e-13 * scale else value.real
    im = 0.0 if abs(value.imag) < 1e-13 * scale else value.imag
    return f"{re + 0.0:.{digits}g}{im + 0.0:+.{digits}g}i"


def parse_point(text: str) -> tuple[complex, ...]:
    """Read a comma separated list of complex coordinates such as ``"i,1+2i"``."""
    parts = [part for part in text.split(",") if part.strip()]
    if not parts:
        raise ValueError("empty point")
    return tuple(parse_complex(part) for part in parts)


def check_axis(axis: int, n: int) -> int:
    """Validate a 1-based axis number and return its 0-based index."""
    if not 1 <= axis <= n:
        raise ValueError(f"axis {axis} outside 1..{n}")
    return axis - 1


def as_points(points: Sequence[float] | np.ndarray, n: int) -> np.ndarray:
    """Coerce one point or a batch of points to a float array of shape ``(m, n)``."""
    array = np.asarray(points, dtype=float)
    if array.ndim == 1:
        array = array.reshape(1, -1)
    if array.shape[-1] != n:
        raise ValueError(f"expected points with {n} coordinates, got shape {array.shape}")
    return array


def create_and_write_file(file_path: Path, text: str) -> None:
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(text, encoding="utf-8")


@cache
def get_version() -> str:
    try:
        return importlib.metadata.version("nevanlinna-measures")
    except importlib.metadata.PackageNotFoundError:
        return "unknown"
