import json
from pathlib import Path
from typing import Any

import pytest

from nevanlinna.core import catalog
from nevanlinna.core.errors import SceneError
from nevanlinna.scene import DimensionPropagator, Scene, SceneLoader, SceneNormalizer, write_scene


class _DefaultPole:
    def patch(self, scene: dict[str, Any]) -> dict[str, Any]:
        patched = dict(scene)
        patched.setdefault("options", {"pole": 2.0})
        return patched


def _write(tmp_path: Path, document: Any) -> Path:
    path = tmp_path / "scene.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def test_bundled_scenes_load(scenes_dir: Path) -> None:
    """Test that every bundled scene loads."""
    paths = sorted(scenes_dir.glob("*.json"))
    assert len(paths) == 11
    for path in paths:
        assert isinstance(SceneLoader(path).open(), Scene)


def test_written_scene_loads_back(scenes_dir: Path, tmp_path: Path) -> None:
    """Test that a written scene is read back unchanged."""
    for path in sorted(scenes_dir.glob("*.json")):
        scene = SceneLoader(path).open()
        target = tmp_path / path.name
        write_scene(scene, target)
        assert SceneLoader(target).open() == scene


def test_dimension_is_propagated(scenes_dir: Path) -> None:
    """Test that nested objects take the scene dimension."""
    scene = SceneLoader(scenes_dir / "transformed-diagonal.json").open()
    assert scene.region is not None
    assert scene.region.n == 2
    scene = SceneLoader(scenes_dir / "anti-diagonal.json").open()
    assert scene.measure == catalog.anti_diagonal()


def test_dimension_is_inferred() -> None:
    """Test that a scene without n takes it from its first object."""
    document = {"measure": {"n": 3, "components": [{"kind": "point_mass", "location": [0.0, 0.0, 0.0]}]}}
    patched = DimensionPropagator().patch(document)
    assert patched["n"] == 3
    assert patched["measure"]["components"][0]["n"] == 3
    assert "n" not in document
    with pytest.raises(SceneError):
        DimensionPropagator().patch({"options": {}})


def test_missing_file() -> None:
    """Test that a missing scene file is reported."""
    with pytest.raises(SceneError):
        SceneLoader("no_such_scene.json").open()


@pytest.mark.parametrize("document", ["not json {", [1, 2, 3]])
def test_unreadable_documents(tmp_path: Path, document: Any) -> None:
    """Test that broken JSON and non-object documents are rejected."""
    path = tmp_path / "scene.json"
    path.write_text(document if isinstance(document, str) else json.dumps(document), encoding="utf-8")
    with pytest.raises(SceneError):
        SceneLoader(path).open()


def test_unsupported_version(tmp_path: Path) -> None:
    """Test that foreign scene versions are refused."""
    with pytest.raises(SceneError):
        SceneLoader(_write(tmp_path, {"version": "2", "n": 1})).open()


def test_invalid_scene(tmp_path: Path) -> None:
    """Test that validation errors become scene errors."""
    document = {"n": 2, "measure": {"n": 1, "components": []}}
    with pytest.raises(SceneError):
        SceneLoader(_write(tmp_path, document)).open()


def test_require(scenes_dir: Path) -> None:
    """Test the per-command object check."""
    scene = SceneLoader(scenes_dir / "minus-one-over-z.json").open()
    scene.require("eval")
    with pytest.raises(SceneError):
        scene.require("fourier")
    with pytest.raises(SceneError):
        scene.require("classify")


def test_custom_transform(tmp_path: Path) -> None:
    """Test that added transforms run after the defaults."""
    normalizer = SceneNormalizer()
    normalizer.add_transform(_DefaultPole())
    path = _write(tmp_path, {"n": 1, "measure": {"components": []}})
    assert SceneLoader(path, normalizer=normalizer).open().options.pole == 2.0


def test_representation_from_measure(scenes_dir: Path) -> None:
    """Test the representation and checked measure of a scene."""
    scene = SceneLoader(scenes_dir / "hyperplane.json").open()
    assert scene.representation.measure == scene.checked_measure
    assert scene.representation.a == 0.0
    empty = Scene(n=1)
    with pytest.raises(SceneError):
        _ = empty.representation
