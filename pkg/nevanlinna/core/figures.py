"""SVG figures of candidate support sets.

Boundaries of admissible sets are drawn solid, forbidden sets dashed and undecided sets dotted.
Area layers are sampled cell by cell on a square grid; the rendered output depends only on the
figure id, the window and the settings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Union

import numpy as np
from jinja2 import Environment, FileSystemLoader

from nevanlinna.core import TEMPLATES, catalog
from nevanlinna.core.geometry import Verdict, VerdictStatus, classify
from nevanlinna.core.log import LOGGER
from nevanlinna.core.regions import (
    AxisInterval,
    CoordinateAffineRegion,
    CrossComplementRegion,
    Region,
    transform_region,
)
from nevanlinna.core.torus.chart import TWO_PI, cayley_inverse
from nevanlinna.core.torus.curves import TorusRegion, classify_torus, torus_curve, torus_region
from nevanlinna.core.utils import create_and_write_file, get_version

AnyRegion = Union[Region, TorusRegion]

PANEL_GAP = 24
TITLE_HEIGHT = 20


class FigureId(str, Enum):
    LINES = "lines"
    STRIPS = "strips"
    CROSS = "cross"
    LINES_TORUS = "lines-torus"
    STRIPS_TORUS = "strips-torus"
    CROSS_TORUS = "cross-torus"

    @property
    def on_torus(self) -> bool:
        return self.value.endswith("-torus")


class LayerKind(str, Enum):
    CURVE = "curve"
    AREA = "area"


STYLES = {
    VerdictStatus.KNOWN_ADMISSIBLE: "solid",
    VerdictStatus.FORBIDDEN: "dashed",
    VerdictStatus.UNDECIDED: "dotted",
}


@dataclass(frozen=True, slots=True)
class Window:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self) -> None:
        bounds = (self.x_min, self.x_max, self.y_min, self.y_max)
        if not all(math.isfinite(value) for value in bounds):
            raise ValueError("window bounds must be finite")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("window must be nonempty")

    @classmethod
    def square(cls, lower: float, upper: float) -> Window:
        return cls(lower, upper, lower, upper)


PLANE_WINDOW = Window.square(-3.0, 3.0)
TORUS_WINDOW = Window.square(0.0, TWO_PI)


@dataclass(frozen=True, slots=True)
class FigureSpec:
    figure: FigureId
    window: Window | None = None
    output: Path | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "figure", FigureId(self.figure))
        if self.figure.on_torus and self.window not in (None, TORUS_WINDOW):
            raise ValueError("torus figures are drawn on [0, 2 pi)^2")

    @property
    def plot_window(self) -> Window:
        if self.window is not None:
            return self.window
        return TORUS_WINDOW if self.figure.on_torus else PLANE_WINDOW


@dataclass(slots=True)
class FigureSettings:
    resolution: int = 512
    precision: int = 3

    def __post_init__(self) -> None:
        if self.resolution < 16:
            raise ValueError("figure resolution must be at least 16")
        if not 0 <= self.precision <= 8:
            raise ValueError("figure precision must lie in 0..8")


@dataclass(frozen=True, slots=True)
class Layer:
    region: AnyRegion
    verdict: Verdict
    kind: LayerKind
    polylines: tuple[np.ndarray, ...] = ()

    @property
    def style(self) -> str:
        return STYLES[self.verdict.status]

    @property
    def label(self) -> str:
        return self.region.describe()

    def contains(self, point: tuple[float, float], tol: float = 1e-9) -> bool:
        return bool(self.region.contains(np.asarray(point, dtype=float), tol)[0])


@dataclass(frozen=True, slots=True)
class Panel:
    title: str
    window: Window
    layers: tuple[Layer, ...]

    def styles_at(self, point: tuple[float, float], tol: float = 1e-9) -> list[str]:
        """Styles of the layers whose set contains ``point``."""
        return [layer.style for layer in self.layers if layer.contains(point, tol)]


@dataclass(frozen=True, slots=True)
class Figure:
    spec: FigureSpec
    panels: tuple[Panel, ...] = field(default_factory=tuple)


def _clip(x: np.ndarray, y: np.ndarray, window: Window) -> tuple[np.ndarray, ...]:
    """Split a sampled curve into the runs that stay inside ``window``."""
    inside = (y >= window.y_min) & (y <= window.y_max) & (x >= window.x_min) & (x <= window.x_max)
    runs = []
    start = None
    for index, flag in enumerate(np.append(inside, False)):
        if flag and start is None:
            start = index
        elif not flag and start is not None:
            if index - start >= 2:
                runs.append(np.column_stack([x[start:index], y[start:index]]))
            start = None
    return tuple(runs)


def _line(slope: float, intercept: float, window: Window, count: int) -> tuple[np.ndarray, ...]:
    x = np.linspace(window.x_min, window.x_max, count + 1)
    return _clip(x, slope * x + intercept, window)


def _vertical(x: float, window: Window) -> tuple[np.ndarray, ...]:
    return (np.array([[x, window.y_min], [x, window.y_max]]),)


def _torus_line(slope: float, intercept: float, count: int) -> tuple[np.ndarray, ...]:
    s1 = (np.arange(count) + 0.5) * TWO_PI / count
    return (np.column_stack([s1, torus_curve(slope, intercept, s1)]),)


def _layer(region: AnyRegion, kind: LayerKind, polylines: tuple[np.ndarray, ...] = ()) -> Layer:
    verdict = classify_torus(region).verdict if isinstance(region, TorusRegion) else classify(region)
    return Layer(region=region, verdict=verdict, kind=kind, polylines=polylines)


def _strip_family() -> list[tuple[str, Region]]:
    strip = catalog.strip_region(1.0, -1.0, 0.0)
    return [
        ("0 < t1 - t2 < 1", strip),
        ("J1", transform_region(strip, 1)),
        ("J2", transform_region(strip, 2)),
        ("J1 J2", transform_region(transform_region(strip, 2), 1)),
    ]


def _cross() -> CrossComplementRegion:
    strips = (AxisInterval(axis=1, lower=1.0, upper=2.0), AxisInterval(axis=2, lower=0.5, upper=2.0))
    return CrossComplementRegion(n=2, strips=strips)


def figure_panels(spec: FigureSpec, settings: FigureSettings | None = None) -> Figure:
    """Panels and classified layers of a figure, before rendering."""
    settings = settings or FigureSettings()
    window = spec.plot_window
    count = settings.resolution
    vertical = CoordinateAffineRegion(n=2, axes=(1,), offsets=(1.0,))
    lines = [(-1.0, catalog.line_region(-1.0)), (1.0, catalog.line_region(1.0))]

    if spec.figure is FigureId.LINES:
        layers = [_layer(vertical, LayerKind.CURVE, _vertical(1.0, window))]
        layers += [_layer(region, LayerKind.CURVE, _line(slope, 0.0, window, count)) for slope, region in lines]
        panels = [Panel("lines", window, tuple(layers))]
    elif spec.figure is FigureId.LINES_TORUS:
        layers = [_layer(torus_region(vertical), LayerKind.CURVE, _vertical(cayley_inverse(1.0), window))]
        layers += [
            _layer(torus_region(region), LayerKind.CURVE, _torus_line(slope, 0.0, count)) for slope, region in lines
        ]
        panels = [Panel("lines on the torus", window, tuple(layers))]
    elif spec.figure is FigureId.STRIPS:
        panels = [Panel(title, window, (_layer(region, LayerKind.AREA),)) for title, region in _strip_family()]
    elif spec.figure is FigureId.STRIPS_TORUS:
        panels = [
            Panel(f"Phi^-1 of {title}", window, (_layer(torus_region(region), LayerKind.AREA),))
            for title, region in _strip_family()
        ]
    elif spec.figure is FigureId.CROSS:
        panels = [Panel("cross complement", window, (_layer(_cross(), LayerKind.AREA),))]
    else:
        panels = [Panel("cross complement on the torus", window, (_layer(torus_region(_cross()), LayerKind.AREA),))]
    return Figure(spec=spec, panels=tuple(panels))


def _cell_mask(region: AnyRegion, window: Window, resolution: int) -> np.ndarray:
    """Membership of the cell centres; row 0 is the top of the panel."""
    x = window.x_min + (np.arange(resolution) + 0.5) * (window.x_max - window.x_min) / resolution
    y = window.y_max - (np.arange(resolution) + 0.5) * (window.y_max - window.y_min) / resolution
    grid_x, grid_y = np.meshgrid(x, y)
    points = np.column_stack([grid_x.ravel(), grid_y.ravel()])
    return np.asarray(region.contains(points), dtype=bool).reshape(resolution, resolution)


def _runs(flags: np.ndarray) -> list[tuple[int, int]]:
    padded = np.concatenate([[False], flags, [False]]).astype(np.int8)
    edges = np.flatnonzero(np.diff(padded))
    return [(int(start), int(stop)) for start, stop in zip(edges[::2], edges[1::2])]


def _fill_rects(mask: np.ndarray) -> list[tuple[int, int, int]]:
    """Row runs ``(row, start, width)`` of the mask."""
    return [(row, start, stop - start) for row in range(mask.shape[0]) for start, stop in _runs(mask[row])]


def _boundary_path(mask: np.ndarray) -> str:
    """Cell edges separating members from non-members, merged into straight runs."""
    commands = []
    vertical = mask[:, 1:] != mask[:, :-1]
    for column in range(vertical.shape[1]):
        commands += [f"M{column + 1} {start}V{stop}" for start, stop in _runs(vertical[:, column])]
    horizontal = mask[1:, :] != mask[:-1, :]
    for row in range(horizontal.shape[0]):
        commands += [f"M{start} {row + 1}H{stop}" for start, stop in _runs(horizontal[row])]
    return "".join(commands)


def _to_pixels(points: np.ndarray, window: Window, resolution: int) -> np.ndarray:
    px = (points[:, 0] - window.x_min) / (window.x_max - window.x_min) * resolution
    py = (window.y_max - points[:, 1]) / (window.y_max - window.y_min) * resolution
    return np.column_stack([px, py])


class FigureRenderer:
    def __init__(self, settings: FigureSettings | None = None, templates_dir: str | None = None) -> None:
        self.settings = settings or FigureSettings()
        self.templates_dir = Path(templates_dir) if templates_dir is not None else TEMPLATES
        self.version = get_version()
        self.env = Environment(loader=FileSystemLoader(self.templates_dir), autoescape=True)
        self.env.filters["num"] = self._number

    def _number(self, value: float) -> str:
        text = f"{value:.{self.settings.precision}f}"
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        return "0" if text == "-0" else text

    def _layer_context(self, layer: Layer, window: Window) -> dict[str, object]:
        resolution = self.settings.resolution
        context: dict[str, object] = {
            "kind": layer.kind.value,
            "style": layer.style,
            "status": layer.verdict.status.value,
            "rule": layer.verdict.rule.value if layer.verdict.rule is not None else "",
            "citation": layer.verdict.citation,
            "label": layer.label,
        }
        if layer.kind is LayerKind.AREA:
            mask = _cell_mask(layer.region, window, resolution)
            context["rects"] = _fill_rects(mask)
            context["boundary"] = _boundary_path(mask)
        else:
            context["polylines"] = [_to_pixels(line, window, resolution).tolist() for line in layer.polylines]
        return context

    def render(self, figure: Figure) -> str:
        resolution = self.settings.resolution
        columns = 1 if len(figure.panels) == 1 else 2
        rows = math.ceil(len(figure.panels) / columns)
        panels = []
        for index, panel in enumerate(figure.panels):
            row, column = divmod(index, columns)
            LOGGER.debug("rendering panel %r with %d layers", panel.title, len(panel.layers))
            panels.append(
                {
                    "title": panel.title,
                    "x": column * (resolution + PANEL_GAP),
                    "y": row * (resolution + PANEL_GAP + TITLE_HEIGHT) + TITLE_HEIGHT,
                    "layers": [self._layer_context(layer, panel.window) for layer in panel.layers],
                }
            )
        return self.env.get_template("figure.svg.jinja2").render(
            figure=figure.spec.figure.value,
            version=self.version,
            size=resolution,
            width=columns * resolution + (columns - 1) * PANEL_GAP,
            height=rows * (resolution + TITLE_HEIGHT) + (rows - 1) * PANEL_GAP,
            panels=panels,
        )


def emit_figure(spec: FigureSpec, settings: FigureSettings | None = None) -> str:
    """Render ``spec`` to an SVG document; the document is also written to ``spec.output`` when set."""
    renderer = FigureRenderer(settings)
    document = renderer.render(figure_panels(spec, renderer.settings))
    if spec.output is not None:
        LOGGER.info("writing figure %s to %s", spec.figure.value, spec.output)
        create_and_write_file(file_path=spec.output, text=document)
    return document
