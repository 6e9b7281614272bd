from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Sequence, TypeVar

import click

from nevanlinna.core.admissibility import CheckVerdict, ConditionReport, GridSpec, check_measure
from nevanlinna.core.errors import NevanlinnaError, NonLebesgueRestrictionError, UndecidableRestrictionError
from nevanlinna.core.figures import FigureId, FigureSettings, FigureSpec, Window, emit_figure
from nevanlinna.core.geometry import Verdict, classify
from nevanlinna.core.kernels import HalfPlanePoint
from nevanlinna.core.log import LogLevelEnum, LoggerSettings, build_root_logger
from nevanlinna.core.measure import restrict_to_hyperplane
from nevanlinna.core.quadrature import QuadratureSpec
from nevanlinna.core.representation import (
    decompose,
    evaluate_decomposition,
    evaluate_with_error,
    nontangential_c,
    transform_representation,
)
from nevanlinna.core.torus import DiskPoint, FourierReport, FourierScan, classify_torus, scan_fourier
from nevanlinna.core.torus.fourier import disk_evaluate_with_error
from nevanlinna.core.utils import create_and_write_file, dump_complex, format_complex, parse_point
from nevanlinna.scene import Scene, SceneLoader

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAIL = 2
EXIT_INCONCLUSIVE = 3
EXIT_FORBIDDEN = 4

F = TypeVar("F", bound=Callable[..., Any])


@dataclass(slots=True)
class CliSettings:
    quadrature: QuadratureSpec
    grid: GridSpec
    out: Path | None = None
    output_format: str = "text"


def _reports_errors(command: F) -> F:
    """Turn domain errors into a click error, which exits with status 1."""

    @wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return command(*args, **kwargs)
        except (NevanlinnaError, ValueError) as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper  # type: ignore[return-value]


def _emit(settings: CliSettings, text: str, document: Any) -> None:
    rendered = json.dumps(document, indent=2) if settings.output_format == "json" else text
    if settings.out is not None:
        create_and_write_file(file_path=settings.out, text=rendered + "\n")
    else:
        click.echo(rendered)


def _points(values: Sequence[str], stored: Sequence[Sequence[complex]], n: int) -> list[tuple[complex, ...]]:
    """Points from the command line, else from the scene; a single coordinate is repeated n times."""
    raw = [parse_point(value) for value in values] or [tuple(point) for point in stored]
    return [point * n if len(point) == 1 else point for point in raw]


def _load(path: Path, command: str) -> Scene:
    scene = SceneLoader(path).open()
    scene.require(command)
    return scene


def _point_list(point: Sequence[complex]) -> list[list[float]]:
    return [dump_complex(value) for value in point]


def _check_text(report: ConditionReport) -> str:
    lines = [
        f"verdict: {report.verdict.value}",
        f"growth integral: {report.growth:.6g} (converged: {report.growth_converged})",
        f"threshold: {report.threshold:.3e}",
        f"max residual: {report.max_residual:.3e}",
        f"max remainder: {report.max_remainder:.3e}",
        "",
        f"{'z':<40} {'pair':<6} {'|residual|':>12} {'error':>10}",
    ]
    for entry in report.residuals:
        point = ", ".join(format_complex(value, 6) for value in entry.z.z)
        pair = f"{entry.first},{entry.second}"
        lines.append(f"{point:<40} {pair:<6} {abs(entry.value):>12.3e} {entry.error:>10.2e}")
    for failing in report.failing_points:
        lines.append("failing at " + ", ".join(format_complex(value, 6) for value in failing.z))
    lines.append(report.note)
    return "\n".join(lines)


def _verdict_text(verdict: Verdict, description: str) -> str:
    lines = [f"region: {description}", f"status: {verdict.status.value}"]
    if verdict.rule is not None:
        lines.append(f"rule: {verdict.rule.value}")
        lines.append(f"citation: {verdict.citation}")
    if verdict.witness is not None:
        lines.append("witness: " + ", ".join(format_complex(value) for value in verdict.witness.z))
    lines += [f"note: {note}" for note in verdict.notes]
    return "\n".join(lines)


def _fourier_text(report: FourierReport) -> str:
    lines = [
        f"total mass: {report.total_mass:.6g}",
        f"largest mixed coefficient: {report.max_mixed:.3e} (threshold {report.threshold:.3e})",
        f"vanishing: {report.vanishing}",
        "",
        f"{'m':<16} {'coefficient':>28} {'error':>10}",
    ]
    for entry in report.entries:
        lines.append(f"{str(entry.m):<16} {format_complex(entry.value, 6):>28} {entry.error:>10.2e}")
    return "\n".join(lines)


@click.group()
@click.option("--tol", type=float, default=None, help="Absolute and relative quadrature tolerance")
@click.option("--grid", type=str, default=None, help="Grid coordinates for check, e.g. 'i,1+i,-1+2i'")
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write the report or figure to this file instead of stdout",
)
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text", help="Report format")
@click.option(
    "--log-level",
    type=click.Choice([level.value for level in LogLevelEnum], case_sensitive=False),
    default=LogLevelEnum.WARNING.value,
    help="Logging level, records go to stderr",
)
@click.pass_context
def cli(
    ctx: click.Context,
    tol: float | None,
    grid: str | None,
    out: Path | None,
    output_format: str,
    log_level: str,
) -> None:
    build_root_logger(LoggerSettings(log_level=LogLevelEnum(log_level.upper())))
    try:
        quadrature = QuadratureSpec().with_tolerance(tol) if tol is not None else QuadratureSpec()
        grid_spec = GridSpec(coordinates=parse_point(grid)) if grid is not None else GridSpec()
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc
    ctx.obj = CliSettings(quadrature=quadrature, grid=grid_spec, out=out, output_format=output_format)


scene_option = click.option(
    "--scene",
    "-s",
    "scene_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Scene JSON file",
)


@click.command("eval")
@scene_option
@click.option("--z", "z_values", multiple=True, help="Point such as 'i' or 'i,1+2i'; repeatable")
@click.pass_obj
@_reports_errors
def eval_command(settings: CliSettings, scene_path: Path, z_values: tuple[str, ...]) -> None:
    scene = _load(scene_path, "eval")
    params = scene.representation
    points = _points(z_values, scene.options.points, scene.n) or [HalfPlanePoint.diagonal(scene.n).z]
    rows, lines = [], []
    for point in points:
        z = HalfPlanePoint(z=point)
        result = evaluate_with_error(params, z, settings.quadrature)
        rows.append(
            {
                "z": _point_list(z.z),
                "value": dump_complex(result.value),
                "error": result.error,
                "converged": result.converged,
            }
        )
        lines.append(format_complex(result.value) if len(points) == 1 else f"{z.z} -> {format_complex(result.value)}")
        if not result.converged:
            lines.append(f"  not converged, error estimate {result.error:.3e}")
    _emit(settings, "\n".join(lines), rows)
    if not all(row["converged"] for row in rows):
        sys.exit(EXIT_INCONCLUSIVE)


@click.command("check")
@scene_option
@click.option("--workers", type=click.IntRange(min=1), default=1, help="Grid points checked in parallel")
@click.pass_obj
@_reports_errors
def check_command(settings: CliSettings, scene_path: Path, workers: int) -> None:
    scene = _load(scene_path, "check")
    extra = tuple(_points((), scene.options.points, scene.n))
    grid = GridSpec(
        coordinates=settings.grid.coordinates,
        pass_tol=settings.grid.pass_tol,
        extra_points=extra,
        workers=workers,
    )
    report = check_measure(scene.checked_measure, grid, settings.quadrature)
    _emit(settings, _check_text(report), report.model_dump(mode="json"))
    codes = {CheckVerdict.PASS: EXIT_OK, CheckVerdict.FAIL: EXIT_FAIL, CheckVerdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}
    sys.exit(codes[report.verdict])


@click.command("classify")
@scene_option
@click.pass_obj
@_reports_errors
def classify_command(settings: CliSettings, scene_path: Path) -> None:
    scene = _load(scene_path, "classify")
    notes: tuple[str, ...] = ()
    if scene.region is not None:
        verdict, description = classify(scene.region), scene.region.describe()
    elif scene.torus_region is not None:
        lifted = classify_torus(scene.torus_region)
        verdict, description, notes = lifted.verdict, lifted.region.describe(), lifted.notes
    else:
        raise click.UsageError("the scene holds no region")
    document = verdict.model_dump(mode="json", exclude={"example"})
    document["region"] = description
    document["torus_notes"] = list(notes)
    text = _verdict_text(verdict, description) + "".join(f"\nnote: {note}" for note in notes)
    _emit(settings, text, document)
    sys.exit(EXIT_FORBIDDEN if verdict.is_forbidden else EXIT_OK)


def _axis(axis: int | None, stored: int | None) -> int:
    chosen = axis if axis is not None else stored
    if chosen is None:
        raise click.UsageError("an axis is required, pass --axis or set options.axis in the scene")
    return chosen


@click.command("transform")
@scene_option
@click.option("--axis", type=click.IntRange(min=1), default=None, help="Coordinate to transform")
@click.option("--pole", type=float, default=None, help="Pole p of z -> p - 1/z")
@click.pass_obj
@_reports_errors
def transform_command(settings: CliSettings, scene_path: Path, axis: int | None, pole: float | None) -> None:
    scene = _load(scene_path, "transform")
    chosen = _axis(axis, scene.options.axis)
    point = scene.options.pole if pole is None else pole
    result = transform_representation(scene.representation, chosen, point, settings.quadrature)
    document = {
        "axis": chosen,
        "pole": point,
        "slope": result.slope,
        "pole_strength": result.pole_strength,
        "params": result.params.model_dump(mode="json"),
    }
    text = "\n".join(
        [
            f"transformed z{chosen} -> {point:g} - 1/z{chosen}",
            f"a = {result.params.a:.10g}",
            "b = (" + ", ".join(f"{value:.10g}" for value in result.params.b) + ")",
            f"hyperplane mass moved into the slope: {result.slope:.10g}",
            f"slope moved into a hyperplane at 0: {result.pole_strength:.10g}",
            f"measure components: {len(result.params.measure.components)}",
        ]
    )
    _emit(settings, text, document)


@click.command("restrict")
@scene_option
@click.option("--axis", type=click.IntRange(min=1), default=None, help="Coordinate of the hyperplane")
@click.option("--pole", type=float, default=None, help="Position p of the hyperplane t_axis = p")
@click.option("--numeric/--exact", default=False, help="Also estimate the constant as a non-tangential limit")
@click.pass_obj
@_reports_errors
def restrict_command(
    settings: CliSettings,
    scene_path: Path,
    axis: int | None,
    pole: float | None,
    numeric: bool,
) -> None:
    scene = _load(scene_path, "restrict")
    chosen = _axis(axis, scene.options.axis)
    point = scene.options.pole if pole is None else pole
    params = scene.representation
    document: dict[str, Any] = {"axis": chosen, "pole": point}
    try:
        constant, _ = restrict_to_hyperplane(params.measure, chosen, point)
        document["constant"] = constant
    except NonLebesgueRestrictionError as exc:
        click.echo(f"not a Nevanlinna measure: {exc}", err=True)
        sys.exit(EXIT_FAIL)
    except UndecidableRestrictionError as exc:
        click.echo(f"exact restriction unavailable: {exc}", err=True)
        document["constant"] = None
        numeric = True
    lines = [f"c_{chosen}({point:g}) = {document['constant']}"]
    if numeric:
        estimate = nontangential_c(params, chosen, point, spec=settings.quadrature)
        document["limit"] = {"value": estimate.value, "residual": estimate.residual}
        lines.append(f"non-tangential limit: {estimate.value:.10g} (residual {estimate.residual:.2e})")
    _emit(settings, "\n".join(lines), document)


def _pair(text: str) -> tuple[int, float]:
    axis, _, location = text.partition(":")
    try:
        return int(axis), float(location)
    except ValueError as exc:
        raise click.BadParameter(f"expected AXIS:LOCATION, got {text!r}") from exc


@click.command("decompose")
@scene_option
@click.option("--pair", "pair_values", multiple=True, help="Hyperplane AXIS:LOCATION to split off; repeatable")
@click.option("--z", "z_values", multiple=True, help="Points where the decomposition is evaluated")
@click.pass_obj
@_reports_errors
def decompose_command(
    settings: CliSettings,
    scene_path: Path,
    pair_values: tuple[str, ...],
    z_values: tuple[str, ...],
) -> None:
    scene = _load(scene_path, "decompose")
    pairs = [_pair(value) for value in pair_values] or list(scene.options.pairs)
    if not pairs:
        raise click.UsageError("no hyperplanes given, pass --pair or set options.pairs in the scene")
    poles, adjusted = decompose(scene.representation, pairs)
    values = []
    for point in _points(z_values, scene.options.points, scene.n):
        z = HalfPlanePoint(z=point)
        value = evaluate_decomposition(poles, adjusted, z, settings.quadrature)
        values.append({"z": _point_list(z.z), "value": dump_complex(value)})
    document = {
        "poles": [pole.model_dump(mode="json") for pole in poles],
        "params": adjusted.model_dump(mode="json"),
        "values": values,
    }
    lines = [f"{pole.strength:.10g} / ({pole.location:g} - z{pole.axis})" for pole in poles] or ["no hyperplane mass"]
    lines.append(f"remaining constant a = {adjusted.a:.10g}")
    lines += [f"{row['z']} -> {format_complex(complex(*row['value']))}" for row in values]
    _emit(settings, "\n".join(lines), document)


@click.command("fourier")
@scene_option
@click.option("--max-index", type=click.IntRange(min=1), default=None, help="Largest |m_j| scanned")
@click.option("--workers", type=click.IntRange(min=1), default=1, help="Coefficients computed in parallel")
@click.pass_obj
@_reports_errors
def fourier_command(settings: CliSettings, scene_path: Path, max_index: int | None, workers: int) -> None:
    scene = _load(scene_path, "fourier")
    scan = FourierScan(max_index=max_index or scene.options.max_index, workers=workers)
    report = scan_fourier(scene.torus_measure, scan, settings.quadrature)
    _emit(settings, _fourier_text(report), report.model_dump(mode="json"))
    if not report.vanishing:
        sys.exit(EXIT_FAIL)
    if not report.converged:
        sys.exit(EXIT_INCONCLUSIVE)


@click.command("disk-eval")
@scene_option
@click.option("--w", "w_values", multiple=True, help="Polydisk point such as '0' or '0.5i,0'; repeatable")
@click.pass_obj
@_reports_errors
def disk_eval_command(settings: CliSettings, scene_path: Path, w_values: tuple[str, ...]) -> None:
    scene = _load(scene_path, "disk-eval")
    nu = scene.torus_measure
    points = _points(w_values, scene.options.disk_points, nu.n) or [(0j,) * nu.n]
    rows, lines = [], []
    for point in points:
        w = DiskPoint(w=point)
        result = disk_evaluate_with_error(nu, scene.options.imag_at_zero, w, settings.quadrature)
        rows.append({"w": _point_list(w.w), "value": dump_complex(result.value), "converged": result.converged})
        lines.append(format_complex(result.value) if len(points) == 1 else f"{w.w} -> {format_complex(result.value)}")
    _emit(settings, "\n".join(lines), rows)
    if not all(row["converged"] for row in rows):
        sys.exit(EXIT_INCONCLUSIVE)


def _window(text: str | None) -> Window | None:
    if text is None:
        return None
    try:
        bounds = [float(part) for part in text.split(",")]
    except ValueError as exc:
        raise click.BadParameter(f"expected XMIN,XMAX,YMIN,YMAX, got {text!r}") from exc
    if len(bounds) != 4:
        raise click.BadParameter(f"expected four bounds, got {len(bounds)}")
    return Window(*bounds)


@click.command("plot")
@click.option("--figure", required=True, type=click.Choice([figure.value for figure in FigureId]), help="Figure id")
@click.option("--window", type=str, default=None, help="Plot window XMIN,XMAX,YMIN,YMAX (plane figures)")
@click.option("--resolution", type=click.IntRange(min=16), default=512, help="Sampling grid per panel side")
@click.pass_obj
@_reports_errors
def plot_command(settings: CliSettings, figure: str, window: str | None, resolution: int) -> None:
    spec = FigureSpec(figure=FigureId(figure), window=_window(window), output=settings.out)
    document = emit_figure(spec, FigureSettings(resolution=resolution))
    if settings.out is None:
        click.echo(document, nl=False)


cli.add_command(eval_command)
cli.add_command(check_command)
cli.add_command(classify_command)
cli.add_command(transform_command)
cli.add_command(restrict_command)
cli.add_command(decompose_command)
cli.add_command(fourier_command)
cli.add_command(disk_eval_command)
cli.add_command(plot_command)


def run(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit status; usage and domain errors give 1."""
    try:
        result = cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="nevanlinna",
            standalone_mode=False,
        )
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    except click.ClickException as exc:
        exc.show()
        return EXIT_ERROR
    except click.exceptions.Abort:
        return EXIT_ERROR
    return result if isinstance(result, int) else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
