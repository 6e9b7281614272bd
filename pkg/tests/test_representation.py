import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nevanlinna.core import catalog
from nevanlinna.core.errors import EstimationFailedError, NonLebesgueRestrictionError
from nevanlinna.core.kernels import HalfPlanePoint
from nevanlinna.core.measure import Measure, restrict_to_hyperplane
from nevanlinna.core.quadrature import QuadratureSpec
from nevanlinna.core.representation import (
    LimitSpec,
    PoleTerm,
    RepresentationParams,
    decompose,
    evaluate,
    evaluate_decomposition,
    evaluate_with_error,
    nontangential_c,
    transform_representation,
    variable_dependence,
)

SPEC = QuadratureSpec(abs_tol=1e-9, rel_tol=1e-9)
LOOSE = QuadratureSpec(abs_tol=1e-7, rel_tol=1e-7)

reals = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
heights = st.floats(min_value=0.1, max_value=10.0, allow_nan=False)
plane_points = st.tuples(reals, heights, reals, heights)

CHARGED = catalog.hyperplane(2, axis=1, offset=2.0, constant=3.0) + catalog.hyperplane(
    2, axis=2, offset=-1.0, constant=0.5
)

ADMISSIBLE = [
    RepresentationParams.of_measure(catalog.point_mass([0.0]) + catalog.point_mass([2.5], weight=1.0)),
    RepresentationParams(n=1, a=-0.5, b=(2.0,), mu=catalog.lebesgue(1)),
    RepresentationParams.of_measure(catalog.anti_diagonal()),
    RepresentationParams(n=2, a=1.0, b=(0.0, 1.5), mu=CHARGED),
]


def test_minus_one_over_z(minus_one_over_z: Measure) -> None:
    """Test that pi * delta_0 represents -1/z."""
    params = RepresentationParams.of_measure(minus_one_over_z)
    for z in (1j, 2 + 0.5j, -3 + 4j):
        assert evaluate(params, HalfPlanePoint.of(z)) == pytest.approx(-1.0 / z, abs=1e-12)


def test_lebesgue_represents_i(spec: QuadratureSpec) -> None:
    """Test that Lebesgue measure represents the constant i."""
    params = RepresentationParams.of_measure(catalog.lebesgue(1))
    assert evaluate(params, HalfPlanePoint.of(2 + 3j), spec) == pytest.approx(1j, abs=1e-6)
    params = RepresentationParams.of_measure(catalog.lebesgue(2))
    assert evaluate(params, HalfPlanePoint.of(1j, 1 + 2j), spec) == pytest.approx(1j, abs=1e-6)


def test_anti_diagonal_represents_sum(anti_diagonal: Measure, spec: QuadratureSpec) -> None:
    """Test the anti-diagonal against -1/(z1 + z2)."""
    params = RepresentationParams.of_measure(anti_diagonal)
    for z1, z2 in ((1j, 1j), (1 + 1j, -2 + 0.5j), (0.3 + 2j, 1 + 1j)):
        value = evaluate(params, HalfPlanePoint.of(z1, z2), spec)
        assert value == pytest.approx(-1.0 / (z1 + z2), abs=1e-5)


def test_linear_terms() -> None:
    """Test the constant and slope parts of the representation."""
    params = RepresentationParams(n=2, a=1.5, b=(2.0, 0.0))
    assert evaluate(params, HalfPlanePoint.of(1 + 1j, 3j)) == pytest.approx(3.5 + 2j)
    with pytest.raises(ValueError):
        RepresentationParams(n=2, b=(-1.0, 0.0))
    with pytest.raises(ValueError):
        RepresentationParams(n=2, b=(1.0,))


def test_dimension_mismatch(anti_diagonal: Measure) -> None:
    """Test that the point must match the measure dimension."""
    with pytest.raises(ValueError):
        evaluate_with_error(RepresentationParams.of_measure(anti_diagonal), HalfPlanePoint.of(1j))


def test_nontangential_limit(hyperplane_measure: Measure, spec: QuadratureSpec) -> None:
    """Test the numeric limit at a charged hyperplane."""
    estimate = nontangential_c(hyperplane_measure, 1, 2.0, spec=spec)
    assert estimate.value == pytest.approx(3.0, abs=1e-4)
    assert len(estimate.samples) == LimitSpec().levels
    assert nontangential_c(hyperplane_measure, 2, 2.0, spec=spec).value == pytest.approx(0.0, abs=1e-4)


def test_nontangential_limit_settles_or_fails(minus_one_over_z: Measure) -> None:
    """Test that the limit is found at the pole and refused where the path does not settle."""
    estimate = nontangential_c(catalog.lebesgue(1) + minus_one_over_z, 1, 0.0)
    assert estimate.value == pytest.approx(1.0, abs=1e-4)
    with pytest.raises(EstimationFailedError):
        nontangential_c(minus_one_over_z, 1, 0.5, LimitSpec(eps0=0.5, levels=3))
    with pytest.raises(ValueError):
        LimitSpec(levels=2)


def test_decompose_splits_pole(hyperplane_measure: Measure, spec: QuadratureSpec) -> None:
    """Test that the pole term and adjusted constant reproduce the function."""
    params = RepresentationParams.of_measure(hyperplane_measure)
    poles, adjusted = decompose(params, [(1, 2.0)])
    assert poles == [PoleTerm(axis=1, location=2.0, strength=3.0)]
    assert adjusted.a == pytest.approx(-1.2)
    assert adjusted.measure.is_trivial
    z = HalfPlanePoint.of(1 + 1j, 2j)
    assert evaluate_decomposition(poles, adjusted, z, spec) == pytest.approx(evaluate(params, z, spec), abs=1e-7)
    assert evaluate_decomposition(poles, adjusted, z) == pytest.approx(3.0 / (2.0 - (1 + 1j)) - 1.2)


def test_decompose_skips_empty_pairs(anti_diagonal: Measure) -> None:
    """Test that pairs without hyperplane mass leave the representation alone."""
    params = RepresentationParams.of_measure(anti_diagonal)
    poles, adjusted = decompose(params, [(1, 0.0), (2, 1.0)])
    assert poles == []
    assert adjusted == params
    with pytest.raises(ValueError):
        decompose(params, [(1, 0.0), (1, 0.0)])


def test_transform_point_mass(minus_one_over_z: Measure) -> None:
    """Test that -1/z composed with -1/z is the identity."""
    transformed = transform_representation(RepresentationParams.of_measure(minus_one_over_z), 1)
    assert transformed.slope == pytest.approx(1.0)
    assert transformed.params.b == pytest.approx((1.0,))
    assert transformed.params.a == pytest.approx(0.0)
    assert transformed.params.measure.is_trivial
    assert evaluate(transformed.params, HalfPlanePoint.of(2 + 3j)) == pytest.approx(2 + 3j)


def test_transform_slope_becomes_pole() -> None:
    """Test that a slope on the transformed axis turns into hyperplane mass at 0."""
    params = RepresentationParams(n=1, a=0.5, b=(2.0,))
    transformed = transform_representation(params, 1)
    assert transformed.pole_strength == 2.0
    z = HalfPlanePoint.of(1 + 1j)
    assert evaluate(transformed.params, z) == pytest.approx(0.5 + 2.0 * (-1.0 / (1 + 1j)))


def test_transform_anti_diagonal(anti_diagonal: Measure, spec: QuadratureSpec) -> None:
    """Test the transported anti-diagonal against the composed function."""
    transformed = transform_representation(RepresentationParams.of_measure(anti_diagonal), 1, spec=spec)
    for z1, z2 in ((1j, 1j), (1 + 1j, 2j)):
        expected = -1.0 / (-1.0 / z1 + z2)
        assert evaluate(transformed.params, HalfPlanePoint.of(z1, z2), spec) == pytest.approx(expected, abs=1e-5)


def test_transform_with_pole(anti_diagonal: Measure, spec: QuadratureSpec) -> None:
    """Test a map with nonzero pole through the translation constant."""
    transformed = transform_representation(RepresentationParams.of_measure(anti_diagonal), 2, pole=1.0, spec=spec)
    z1, z2 = 1 + 1j, 0.5 + 2j
    expected = -1.0 / (z1 + 1.0 - 1.0 / z2)
    assert evaluate(transformed.params, HalfPlanePoint.of(z1, z2), spec) == pytest.approx(expected, abs=1e-5)


def test_transform_refuses_non_lebesgue_pole() -> None:
    """Test that a point mass on the pole hyperplane stops the transform."""
    params = RepresentationParams.of_measure(catalog.point_mass([0.0, 0.0]))
    with pytest.raises(NonLebesgueRestrictionError):
        transform_representation(params, 1)


def test_variable_dependence(hyperplane_measure: Measure, anti_diagonal: Measure) -> None:
    """Test the hyperplane-mass test for dependence on a variable."""
    assert variable_dependence(RepresentationParams.of_measure(catalog.hyperplane(2, 1)), 1) is True
    assert variable_dependence(RepresentationParams.of_measure(hyperplane_measure), 1) is None
    assert variable_dependence(RepresentationParams.of_measure(anti_diagonal), 2) is None
    assert variable_dependence(RepresentationParams(n=2, b=(0.0, 1.0)), 2) is True


def _point(x1: float, y1: float, x2: float, y2: float) -> HalfPlanePoint:
    return HalfPlanePoint.of(complex(x1, y1), complex(x2, y2))


@pytest.mark.slow
@pytest.mark.parametrize(
    ("mu", "axis", "pole"),
    [
        (catalog.hyperplane(2, axis=1, offset=2.0, constant=3.0), 1, 2.0),
        (CHARGED, 2, -1.0),
        (CHARGED, 1, -1.0),
        (catalog.anti_diagonal(), 1, 0.0),
        (catalog.lebesgue(1) + catalog.point_mass([0.0]), 1, 0.0),
        (catalog.point_mass([1.0], weight=2.0), 1, 1.0),
        (catalog.point_mass([1.0]), 1, 0.0),
    ],
)
def test_limit_matches_restriction(mu: Measure, axis: int, pole: float) -> None:
    """Test that the numeric limit agrees with the symbolic restriction constant."""
    constant, _ = restrict_to_hyperplane(mu, axis, pole)
    assert nontangential_c(mu, axis, pole, spec=SPEC).value == pytest.approx(constant, abs=1e-4)


@pytest.mark.parametrize(("axis", "pole", "expected"), [(1, 2.0, 3.0), (2, -1.0, 0.5)])
def test_limit_ignores_the_fixed_coordinates(axis: int, pole: float, expected: float) -> None:
    """Test that moving the other coordinates to 2i leaves the limit unchanged."""
    params = RepresentationParams.of_measure(CHARGED)
    near = nontangential_c(params, axis, pole, spec=SPEC)
    far = nontangential_c(params, axis, pole, LimitSpec(fixed_imag=2.0), spec=SPEC)
    assert near.value == pytest.approx(expected, abs=1e-4)
    assert far.value == pytest.approx(near.value, abs=1e-4)


@settings(max_examples=25, deadline=None)
@given(index=st.integers(min_value=0, max_value=len(ADMISSIBLE) - 1), coordinates=plane_points)
def test_values_stay_in_the_upper_half_plane(index: int, coordinates: tuple[float, float, float, float]) -> None:
    """Test that admissible representations take values with nonnegative imaginary part."""
    params = ADMISSIBLE[index]
    z = _point(*coordinates) if params.n == 2 else HalfPlanePoint.of(complex(*coordinates[:2]))
    assert evaluate(params, z, LOOSE).imag >= -10.0 * LOOSE.abs_tol


@settings(max_examples=20, deadline=None)
@given(coordinates=plane_points)
def test_decomposition_sums_back(coordinates: tuple[float, float, float, float]) -> None:
    """Test that pole terms plus the adjusted representation give the original values."""
    params = RepresentationParams(n=2, a=0.25, b=(1.0, 0.0), mu=CHARGED + catalog.anti_diagonal())
    poles, adjusted = decompose(params, [(1, 2.0), (2, -1.0)])
    assert len(poles) == 2
    z = _point(*coordinates)
    assert evaluate_decomposition(poles, adjusted, z, SPEC) == pytest.approx(evaluate(params, z, SPEC), abs=1e-6)


@settings(max_examples=10, deadline=None)
@given(coordinates=plane_points)
def test_transform_twice_is_identity(coordinates: tuple[float, float, float, float]) -> None:
    """Test that composing with -1/z_1 twice gives back the original function."""
    params = RepresentationParams(
        n=2,
        a=0.5,
        b=(1.0, 0.0),
        mu=catalog.hyperplane(2, axis=1, offset=2.0, constant=3.0) + catalog.anti_diagonal(),
    )
    once = transform_representation(params, 1, spec=SPEC)
    twice = transform_representation(once.params, 1, spec=SPEC)
    assert twice.params.b == pytest.approx(params.b)
    assert twice.params.a == pytest.approx(params.a)
    z = _point(*coordinates)
    assert evaluate(twice.params, z, SPEC) == pytest.approx(evaluate(params, z, SPEC), abs=1e-6)
