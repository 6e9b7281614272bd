from __future__ import annotations

from typing import Any, Iterable, Protocol

from nevanlinna.scene.transforms import DimensionPropagator, VersionDefaulter


class SceneTransform(Protocol):
    def patch(self, scene: dict[str, Any]) -> dict[str, Any]: ...


class SceneNormalizer:
    def __init__(self, transforms: Iterable[SceneTransform] | None = None) -> None:
        default_transforms = (VersionDefaulter(), DimensionPropagator())
        self._transforms = list(transforms or default_transforms)

    def add_transform(self, transform: SceneTransform) -> None:
        self._transforms.append(transform)

    def normalize(self, scene: dict[str, Any]) -> dict[str, Any]:
        normalized = scene
        for transform in self._transforms:
            normalized = transform.patch(normalized)
        return normalized
