from __future__ import annotations

import copy
from typing import Any

from nevanlinna.core.errors import SceneError
from nevanlinna.scene.models import SCENE_VERSION

_OBJECTS = ("params", "measure", "region", "torus_region", "torus_measure")
_DIMENSIONLESS_KINDS = {"torus_image"}
_DIMENSIONLESS_KEYS = {"density", "strips", "maps", "options"}


class VersionDefaulter:
    """Fills in the scene version and rejects versions this package cannot read."""

    def patch(self, scene: dict[str, Any]) -> dict[str, Any]:
        patched = dict(scene)
        version = str(patched.setdefault("version", SCENE_VERSION))
        if version != SCENE_VERSION:
            raise SceneError(f"unsupported scene version {version!r}, expected {SCENE_VERSION!r}")
        patched["version"] = version
        return patched


class DimensionPropagator:
    """Copies the scene dimension ``n`` into every nested object that omits it.

    A scene without ``n`` takes it from the first object that states one.
    """

    def patch(self, scene: dict[str, Any]) -> dict[str, Any]:
        patched = copy.deepcopy(scene)
        n = patched.get("n")
        if n is None:
            n = next((self._stated(patched[name]) for name in _OBJECTS if isinstance(patched.get(name), dict)), None)
            if n is None:
                raise SceneError("scene dimension n is missing and cannot be inferred")
            patched["n"] = n
        for name in _OBJECTS:
            if isinstance(patched.get(name), dict):
                self._fill(patched[name], int(n))
        return patched

    @classmethod
    def _stated(cls, node: dict[str, Any]) -> int | None:
        if "n" in node:
            return int(node["n"])
        inner = node.get("inner")
        return cls._stated(inner) if isinstance(inner, dict) else None

    @classmethod
    def _fill(cls, node: Any, n: int) -> None:
        if isinstance(node, list):
            for item in node:
                cls._fill(item, n)
            return
        if not isinstance(node, dict):
            return
        if node.get("kind") not in _DIMENSIONLESS_KINDS:
            node.setdefault("n", n)
        for key, value in node.items():
            if key not in _DIMENSIONLESS_KEYS:
                cls._fill(value, n)
