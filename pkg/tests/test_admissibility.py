import math

import pytest

from nevanlinna.core import catalog
from nevanlinna.core.admissibility import (
    CheckVerdict,
    GridSpec,
    check_measure,
    nevanlinna_residual,
    residue_identity_check,
)
from nevanlinna.core.geometry import strip_witness
from nevanlinna.core.kernels import HalfPlanePoint
from nevanlinna.core.measure import Measure
from nevanlinna.core.quadrature import QuadratureSpec


@pytest.mark.slow
def test_lebesgue_plane_passes(loose_spec: QuadratureSpec) -> None:
    """Test that Lebesgue measure on the plane passes both conditions."""
    report = check_measure(catalog.lebesgue(2), GridSpec(coordinates=(1j,)), loose_spec)
    assert report.verdict is CheckVerdict.PASS
    assert report.growth == pytest.approx(math.pi**2, rel=1e-6)
    assert report.sampled


def test_anti_diagonal_passes(anti_diagonal: Measure, loose_spec: QuadratureSpec) -> None:
    """Test the anti-diagonal on the default grid."""
    report = check_measure(anti_diagonal, spec=loose_spec)
    assert report.verdict is CheckVerdict.PASS
    assert len(report.residuals) == 9
    assert not report.failing_points
    assert report.max_residual < report.threshold


def test_point_mass_in_the_plane_fails() -> None:
    """Test that a point mass in R^2 violates the Nevanlinna condition exactly."""
    report = check_measure(catalog.point_mass([0.0, 0.0]))
    assert report.verdict is CheckVerdict.FAIL
    assert report.nevanlinna_violated
    assert HalfPlanePoint.of(1j, 1j) in report.failing_points


def test_diagonal_fails(spec: QuadratureSpec) -> None:
    """Test that the diagonal measure is rejected."""
    mu = catalog.diagonal()
    residual = nevanlinna_residual(mu, HalfPlanePoint.of(1j, 1j), 1, 2, spec)
    assert residual.value == pytest.approx(math.pi**2 / 2.0, rel=1e-7)
    assert check_measure(mu, GridSpec(coordinates=(1j, 1 + 1j)), spec).verdict is CheckVerdict.FAIL


def test_strip_fails_at_witness(loose_spec: QuadratureSpec) -> None:
    """Test that the strip measure violates the condition at its witness point."""
    witness = strip_witness(1.0, -1.0, 1.0)
    grid = GridSpec(coordinates=(1j,), extra_points=(witness.z,))
    report = check_measure(catalog.strip_lebesgue(1.0, -1.0, 1.0), grid, loose_spec)
    assert report.verdict is CheckVerdict.FAIL
    assert witness in report.failing_points


def test_residue_identity(spec: QuadratureSpec) -> None:
    """Test that the conjugate-pole integral vanishes numerically."""
    for z in (1j, 2 + 0.5j, -1 + 3j):
        result = residue_identity_check(z, spec)
        assert result.converged
        assert abs(result.value) < 1e-8
    with pytest.raises(ValueError):
        residue_identity_check(1.0 + 0j)


def test_residual_needs_two_axes(minus_one_over_z: Measure, anti_diagonal: Measure) -> None:
    """Test argument checks of the residual."""
    with pytest.raises(ValueError):
        nevanlinna_residual(minus_one_over_z, HalfPlanePoint.of(1j), 1, 2)
    with pytest.raises(ValueError):
        nevanlinna_residual(anti_diagonal, HalfPlanePoint.of(1j, 1j), 2, 1)


def test_one_variable_measures_only_check_growth(minus_one_over_z: Measure) -> None:
    """Test that n = 1 reports carry no residuals."""
    report = check_measure(minus_one_over_z)
    assert report.residuals == ()
    assert report.verdict is CheckVerdict.PASS


def test_grid_validation() -> None:
    """Test that grid points off the upper half-plane are rejected."""
    with pytest.raises(ValueError):
        GridSpec(coordinates=(1.0 + 0j,))
    with pytest.raises(ValueError):
        GridSpec(workers=0)
    assert len(GridSpec().points(2)) == 9
    assert len(GridSpec(extra_points=((1j,), (1j, 2j))).points(2)) == 10


def test_workers_do_not_change_the_report(anti_diagonal: Measure, loose_spec: QuadratureSpec) -> None:
    """Test that threaded evaluation gives the same numbers."""
    serial = check_measure(anti_diagonal, GridSpec(coordinates=(1j, 1 + 1j)), loose_spec)
    threaded = check_measure(anti_diagonal, GridSpec(coordinates=(1j, 1 + 1j), workers=3), loose_spec)
    assert serial.model_dump(exclude={"version"}) == threaded.model_dump(exclude={"version"})
