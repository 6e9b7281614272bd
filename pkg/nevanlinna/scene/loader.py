from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from nevanlinna.core.errors import SceneError
from nevanlinna.core.log import LOGGER
from nevanlinna.core.utils import create_and_write_file
from nevanlinna.scene.models import Scene
from nevanlinna.scene.normalizer import SceneNormalizer


class SceneLoader:
    def __init__(self, path: str | Path, *, normalizer: SceneNormalizer | None = None) -> None:
        self.scene_path = Path(path)
        self._normalizer = normalizer or SceneNormalizer()

    def _read(self) -> dict[str, Any]:
        try:
            with open(self.scene_path, encoding="utf-8") as f:
                document = json.loads(f.read())
        except FileNotFoundError as e:
            raise SceneError(f"scene file not found: {self.scene_path}") from e
        except json.JSONDecodeError as e:
            raise SceneError(f"scene file {self.scene_path} is not valid JSON: {e}") from e
        if not isinstance(document, dict):
            raise SceneError(f"scene file {self.scene_path} must hold a JSON object")
        return document

    def open(self) -> Scene:
        document = self._normalizer.normalize(self._read())
        try:
            scene = Scene.model_validate(document)
        except ValidationError as e:
            raise SceneError(f"invalid scene {self.scene_path}:\n{e}") from e
        LOGGER.debug("scene loaded from %s (n=%d)", self.scene_path, scene.n)
        return scene


def scene_to_json(scene: Scene) -> dict[str, Any]:
    return scene.model_dump(mode="json", exclude_none=True)


def write_scene(scene: Scene, path: Path) -> None:
    create_and_write_file(file_path=path, text=json.dumps(scene_to_json(scene), indent=2) + "\n")
