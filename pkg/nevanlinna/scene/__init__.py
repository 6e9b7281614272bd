from .loader import SceneLoader, scene_to_json, write_scene
from .models import Scene, SceneOptions
from .normalizer import SceneNormalizer, SceneTransform
from .transforms import DimensionPropagator, VersionDefaulter

__all__ = [
    "DimensionPropagator",
    "Scene",
    "SceneLoader",
    "SceneNormalizer",
    "SceneOptions",
    "SceneTransform",
    "VersionDefaulter",
    "scene_to_json",
    "write_scene",
]
