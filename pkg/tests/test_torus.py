import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nevanlinna.core import catalog
from nevanlinna.core.admissibility import CheckVerdict, GridSpec, check_measure
from nevanlinna.core.errors import ChartSeamError, NonLebesgueRestrictionError
from nevanlinna.core.geometry import Rule, VerdictStatus
from nevanlinna.core.kernels import HalfPlanePoint
from nevanlinna.core.measure import Measure, PointMassComponent
from nevanlinna.core.quadrature import QuadratureSpec
from nevanlinna.core.representation import evaluate
from nevanlinna.core.torus import (
    DiskPoint,
    FourierScan,
    TorusBoxDensity,
    TorusHyperplane,
    TorusMeasure,
    TorusPointMass,
    blaschke_decompose,
    cayley,
    cayley_inverse,
    cayley_point,
    choose_chart,
    classify_torus,
    disk_evaluate,
    evaluate_blaschke,
    inverse_transport,
    mixed_fourier_coefficient,
    mixed_indices,
    restrict_torus,
    scan_fourier,
    torus_curve,
    torus_mass_divergence,
    torus_params,
    torus_region,
    transport,
)

TWO_PI = 2.0 * math.pi

angles = st.floats(min_value=0.05, max_value=TWO_PI - 0.05, allow_nan=False)
torus_points = st.lists(st.tuples(angles, angles, st.floats(min_value=0.1, max_value=10.0)), min_size=2, max_size=5)


def _point(*location: float, weight: float = TWO_PI) -> TorusMeasure:
    n = len(location)
    return TorusMeasure(n=n, components=(TorusPointMass(n=n, location=location, weight=weight),))


def test_cayley_chart() -> None:
    """Test the chart, its inverse and the seam."""
    assert cayley(math.pi) == pytest.approx(0.0, abs=1e-15)
    assert cayley_inverse(1.0) == pytest.approx(1.5 * math.pi)
    assert cayley_inverse(0.0, shift=1.0) == pytest.approx(math.pi - 1.0)
    s = np.linspace(0.1, TWO_PI - 0.1, 9)
    assert cayley_inverse(cayley(s)) == pytest.approx(s)
    with pytest.raises(ChartSeamError):
        cayley(0.0)
    with pytest.raises(ChartSeamError):
        cayley(TWO_PI - 1.0, shift=1.0)
    assert math.isfinite(cayley(0.0, shift=1.0))


def test_cayley_point() -> None:
    """Test the map from the poly-upper half-plane to the polydisk."""
    assert cayley_point(HalfPlanePoint.of(1j, 1j)).w == (0j, 0j)
    assert abs(cayley_point(HalfPlanePoint.of(3 + 0.1j)).w[0]) < 1.0
    with pytest.raises(ValueError):
        DiskPoint.of(1.0)


@pytest.mark.parametrize("w", [0j, 0.5, -0.3 + 0.4j, 0.9j])
def test_point_mass_on_the_disk(w: complex) -> None:
    """Test that 2 pi delta_pi gives (1 - w)/(1 + w)."""
    assert disk_evaluate(_point(math.pi), 0.0, DiskPoint.of(w)) == pytest.approx((1 - w) / (1 + w), abs=1e-10)


def test_lebesgue_on_the_disk() -> None:
    """Test that Lebesgue measure on the torus gives the constant 1."""
    assert disk_evaluate(TorusMeasure.lebesgue(1), 0.0, DiskPoint.of(0.3 + 0.2j)) == pytest.approx(1.0)
    assert disk_evaluate(TorusMeasure.lebesgue(2), 2.0, DiskPoint.of(0.5, -0.5j)) == pytest.approx(1.0 + 2j)


def test_polydisk_and_half_plane_agree() -> None:
    """Test that the transported representation gives i f(w(z))."""
    nu = _point(math.pi)
    params = torus_params(nu)
    for z in (1j, 2 + 0.5j):
        point = HalfPlanePoint.of(z)
        assert evaluate(params, point) == pytest.approx(-1.0 / z)
        assert evaluate(params, point) == pytest.approx(1j * disk_evaluate(nu, 0.0, cayley_point(point)))


def test_inverse_transport_of_point_mass() -> None:
    """Test that pi * delta_0 comes back as 2 pi * delta_pi."""
    nu = inverse_transport(catalog.point_mass([0.0]))
    component = nu.components[0]
    assert isinstance(component, TorusPointMass)
    assert component.location == pytest.approx((math.pi,))
    assert component.weight == pytest.approx(TWO_PI)
    back = transport(nu).components[0]
    assert isinstance(back, PointMassComponent)
    assert back.location == pytest.approx((0.0,), abs=1e-15)
    assert back.weight == pytest.approx(math.pi)


def test_mixed_coefficients_of_lebesgue_vanish_exactly() -> None:
    """Test the closed-form Fourier coefficients of Lebesgue measure."""
    nu = TorusMeasure.lebesgue(2)
    assert mixed_fourier_coefficient(nu, (1, -1)).value == 0j
    assert mixed_fourier_coefficient(nu, (0, 0)).value == pytest.approx(TWO_PI**2)
    report = scan_fourier(nu, FourierScan(max_index=3))
    assert report.vanishing
    assert report.max_mixed == 0.0
    assert len(report.entries) == len(mixed_indices(2, 3)) == 18


def test_point_mass_has_mixed_coefficients() -> None:
    """Test that a point mass in the 2-torus is rejected by the scan."""
    report = scan_fourier(_point(1.0, 2.0), FourierScan(max_index=2))
    assert not report.vanishing
    assert report.max_mixed == pytest.approx(TWO_PI)


def test_transported_anti_diagonal_vanishes(loose_spec: QuadratureSpec) -> None:
    """Test that the anti-diagonal seen on the torus has vanishing mixed coefficients."""
    nu = inverse_transport(catalog.anti_diagonal())
    report = scan_fourier(nu, FourierScan(max_index=4, tol=1e-4), loose_spec)
    assert report.max_mixed < 1e-4
    assert report.vanishing
    assert report.total_mass == pytest.approx(2.0 * math.pi**2, rel=1e-6)


def test_scan_needs_two_dimensions() -> None:
    """Test argument checks of the scan."""
    with pytest.raises(ValueError):
        scan_fourier(TorusMeasure.lebesgue(1))
    with pytest.raises(ValueError):
        FourierScan(max_index=0)
    with pytest.raises(ValueError):
        mixed_fourier_coefficient(TorusMeasure.lebesgue(2), (1, -1, 0))


def test_mass_divergence() -> None:
    """Test the weighted mass near the origin of the torus."""
    assert torus_mass_divergence(TorusMeasure.lebesgue(1), 0.1) == pytest.approx(10.0 - 1.0 / TWO_PI)
    assert torus_mass_divergence(TorusMeasure.lebesgue(1), 0.01) > torus_mass_divergence(TorusMeasure.lebesgue(1), 0.1)
    assert torus_mass_divergence(_point(0.05), 0.1) == 0.0
    with pytest.raises(ValueError):
        torus_mass_divergence(TorusMeasure.lebesgue(1), 0.0)


def test_torus_curve() -> None:
    """Test the images of the diagonal and the anti-diagonal."""
    s = np.linspace(0.2, TWO_PI - 0.2, 7)
    assert torus_curve(1.0, 0.0, s) == pytest.approx(s)
    assert torus_curve(-1.0, 0.0, s) == pytest.approx(TWO_PI - s)
    with pytest.raises(ValueError):
        torus_curve(0.0, 1.0, 1.0)
    with pytest.raises(ChartSeamError):
        torus_curve(1.0, 0.0, 0.0)


def test_classify_torus() -> None:
    """Test that half-plane verdicts lift to the torus."""
    lifted = classify_torus(torus_region(catalog.diagonal_region(2)))
    assert lifted.verdict.status is VerdictStatus.FORBIDDEN
    assert lifted.verdict.citation == "Thm 3.11"
    assert lifted.verdict.rule is Rule.POSITIVE_PROPORTIONAL_ROWS
    assert lifted.notes
    lifted = classify_torus(torus_region(catalog.anti_diagonal_region()))
    assert lifted.verdict.status is VerdictStatus.KNOWN_ADMISSIBLE
    assert lifted.verdict.example is None


def test_torus_region_membership() -> None:
    """Test membership through the chart, seam points excluded."""
    diagonal = torus_region(catalog.diagonal_region(2))
    assert bool(diagonal.contains([1.0, 1.0])[0])
    assert not bool(diagonal.contains([1.0, 2.0])[0])
    assert not bool(diagonal.contains([0.0, 0.0])[0])
    with pytest.raises(ValueError):
        torus_region(catalog.diagonal_region(2), shift=0.5)


def test_choose_chart() -> None:
    """Test that the chart avoids seam mass."""
    assert choose_chart(TorusMeasure.lebesgue(1)) == 0.0
    assert choose_chart(_point(0.0)) == 1.0
    with pytest.raises(ChartSeamError):
        choose_chart(_point(0.0) + _point(TWO_PI - 1.0))
    with pytest.raises(ChartSeamError):
        transport(_point(0.0), shift=0.0)
    box = TorusMeasure(n=1, components=(TorusBoxDensity(n=1, lower=(1.0,), upper=(2.0,)),))
    assert choose_chart(box) == 0.0


def test_blaschke_decompose() -> None:
    """Test that splitting torus hyperplanes preserves the polydisk function."""
    plane = TorusHyperplane(n=2, axis=1, offset=math.pi, constant=3.0)
    nu = TorusMeasure(n=2, components=(plane,)) + TorusMeasure.lebesgue(2)
    terms, remainder = blaschke_decompose(nu, [(1, math.pi), (2, 1.0)])
    assert len(terms) == 1
    assert terms[0].strength == 3.0
    assert remainder == TorusMeasure.lebesgue(2)
    w = DiskPoint.of(0.2 + 0.1j, -0.4j)
    assert evaluate_blaschke(terms, remainder, 0.5, w) == pytest.approx(disk_evaluate(nu, 0.5, w), abs=1e-12)
    with pytest.raises(ValueError):
        blaschke_decompose(nu, [(1, 1.0), (1, 1.0)])


def test_restrict_torus() -> None:
    """Test the hyperplane restriction on the torus."""
    plane = TorusMeasure(n=2, components=(TorusHyperplane(n=2, axis=1, offset=math.pi, constant=2.0),))
    assert restrict_torus(plane, 1, math.pi) == (2.0, TorusMeasure(n=2))
    constant, rest = restrict_torus(TorusMeasure.lebesgue(2), 2, 1.0)
    assert constant == 0.0
    assert rest == TorusMeasure.lebesgue(2)
    with pytest.raises(NonLebesgueRestrictionError):
        restrict_torus(_point(0.0, 0.0, weight=4.0 * math.pi**2), 1, 0.0)
    with pytest.raises(ValueError):
        restrict_torus(plane, 3, 0.0)


@settings(max_examples=30, deadline=None)
@given(points=torus_points)
def test_torus_round_trip(points: list[tuple[float, float, float]]) -> None:
    """Test that several point masses and a hyperplane survive transport and its inverse."""
    components = [TorusPointMass(n=2, location=(s1, s2), weight=weight) for s1, s2, weight in points]
    nu = TorusMeasure(n=2, components=(*components, TorusHyperplane(n=2, axis=2, offset=1.0, constant=0.5)))
    back = inverse_transport(transport(nu, shift=0.0))
    assert len(back.components) == len(nu.components)
    for original, returned in zip(nu.components[:-1], back.components[:-1]):
        assert isinstance(returned, TorusPointMass)
        assert returned.location == pytest.approx(original.location, rel=1e-9, abs=1e-12)
        assert returned.weight == pytest.approx(original.weight, rel=1e-9)
    hyperplane = back.components[-1]
    assert isinstance(hyperplane, TorusHyperplane)
    assert hyperplane.offset == pytest.approx(1.0)
    assert hyperplane.constant == pytest.approx(0.5)


def test_plane_round_trip() -> None:
    """Test that point masses in the plane come back from the torus unchanged."""
    locations = [(0.0, 0.0), (1.5, -2.0), (-30.0, 4.0), (0.25, 100.0)]
    mu = Measure(
        n=2,
        components=tuple(PointMassComponent(n=2, location=t, weight=1.0 + k) for k, t in enumerate(locations)),
    )
    back = transport(inverse_transport(mu))
    for original, returned in zip(mu.components, back.components):
        assert isinstance(returned, PointMassComponent)
        assert returned.location == pytest.approx(original.location, rel=1e-9, abs=1e-9)
        assert returned.weight == pytest.approx(original.weight, rel=1e-9)


@pytest.mark.slow
@pytest.mark.parametrize(
    ("mu", "admissible"),
    [(catalog.anti_diagonal(), True), (catalog.point_mass([0.0, 0.0]), False), (catalog.diagonal(), False)],
)
def test_fourier_scan_agrees_with_check(mu: Measure, admissible: bool, loose_spec: QuadratureSpec) -> None:
    """Test that vanishing mixed coefficients and the half-plane check give the same answer."""
    report = scan_fourier(inverse_transport(mu), FourierScan(max_index=3, tol=1e-4), loose_spec)
    check = check_measure(mu, GridSpec(coordinates=(1j, 1 + 1j)), loose_spec)
    assert report.vanishing is admissible
    assert (check.verdict is CheckVerdict.PASS) is admissible
