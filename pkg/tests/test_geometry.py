import pytest

from nevanlinna.core import catalog
from nevanlinna.core.errors import WitnessConstructionError
from nevanlinna.core.geometry import (
    CITATIONS,
    Rule,
    Verdict,
    VerdictStatus,
    box_cross,
    classify,
    cross_transport,
    sigma_witness,
    strip_witness,
)
from nevanlinna.core.kernels import HalfPlanePoint
from nevanlinna.core.measure import truncated_mass
from nevanlinna.core.regions import (
    AxisInterval,
    BoxRegion,
    CoordinateAffineRegion,
    CrossComplementRegion,
    Region,
    region_contains,
    transform_region,
)

CROSS = CrossComplementRegion(
    n=2,
    strips=(AxisInterval(axis=1, lower=1.0, upper=2.0), AxisInterval(axis=2, lower=0.5, upper=2.0)),
)

CODIM_TWO = CoordinateAffineRegion(n=3, axes=(1, 2), offsets=(0.0, 1.0))

FORBIDDEN = VerdictStatus.FORBIDDEN
ADMISSIBLE = VerdictStatus.KNOWN_ADMISSIBLE
UNDECIDED = VerdictStatus.UNDECIDED


@pytest.mark.parametrize(
    ("region", "status", "rule", "citation"),
    [
        (catalog.diagonal_region(2), FORBIDDEN, Rule.POSITIVE_PROPORTIONAL_ROWS, "Thm 3.11"),
        (catalog.diagonal_region(3), FORBIDDEN, Rule.POSITIVE_PROPORTIONAL_ROWS, "Thm 3.11"),
        (catalog.line_region(2.0, 1.0), FORBIDDEN, Rule.POSITIVE_PROPORTIONAL_ROWS, "Thm 3.11"),
        (catalog.anti_diagonal_region(), ADMISSIBLE, Rule.ADMISSIBLE_CATALOG, "Thm 2.2"),
        (catalog.sum_plane_region(3), ADMISSIBLE, Rule.ADMISSIBLE_CATALOG, "Thm 2.2"),
        (catalog.strip_region(1.0, -1.0, 1.0), FORBIDDEN, Rule.POSITIVE_SLOPE_STRIP, "Thm 3.14"),
        (catalog.first_quadrant(), FORBIDDEN, Rule.COORDINATE_CROSS, "Thm 3.23"),
        (transform_region(catalog.diagonal_region(2), 1), FORBIDDEN, Rule.MOEBIUS_TRANSPORT, "Coro 3.21"),
        (CROSS, FORBIDDEN, Rule.COORDINATE_CROSS, "Thm 3.23"),
        (catalog.whole_space(2), ADMISSIBLE, Rule.ADMISSIBLE_CATALOG, "Thm 2.2"),
        (CODIM_TWO, FORBIDDEN, Rule.COORDINATE_SUBSPACE_NULL, "Coro 3.8"),
        (CoordinateAffineRegion(n=2, axes=(2,), offsets=(1.0,)), ADMISSIBLE, Rule.HYPERPLANE_LEBESGUE, "Thm 3.4"),
        (catalog.whole_space(1), ADMISSIBLE, Rule.ONE_VARIABLE, "Thm 2.2"),
        (catalog.strip_region(-1.0, -1.0, 1.0), UNDECIDED, None, ""),
        (transform_region(catalog.anti_diagonal_region(), 2), UNDECIDED, None, ""),
    ],
)
def test_classify(region: Region, status: VerdictStatus, rule: Rule | None, citation: str) -> None:
    """Test the rule cascade and its citations on the catalog of regions."""
    verdict = classify(region)
    assert verdict.status is status
    assert verdict.rule is rule
    assert verdict.citation == citation


def test_forbidden_verdicts_carry_witnesses() -> None:
    """Test that row and strip verdicts come with a point in the poly-upper half-plane."""
    for region in (catalog.diagonal_region(2), catalog.strip_region(1.0, -1.0, 1.0)):
        verdict = classify(region)
        assert verdict.witness is not None
        assert all(z.imag > 0 for z in verdict.witness.z)


def test_admissible_verdicts_carry_examples() -> None:
    """Test that catalog verdicts name a measure supported on the region."""
    verdict = classify(catalog.anti_diagonal_region())
    assert verdict.example == catalog.anti_diagonal()
    assert classify(catalog.whole_space(3)).example == catalog.lebesgue(3)


def test_moebius_verdict_lists_conditions() -> None:
    """Test that transported verdicts state the hyperplane conditions."""
    region = transform_region(transform_region(catalog.strip_region(1.0, -1.0, 1.0), 2), 1, pole=0.5)
    verdict = classify(region)
    assert verdict.is_forbidden
    assert any("t1 = 0.5" in note for note in verdict.notes)
    assert any("t2 = 0" in note for note in verdict.notes)


def test_sigma_witness() -> None:
    """Test the witness for rows in ratio two."""
    witness = sigma_witness([[1.0], [2.0]], [1.0, 0.0], 1, 2, 2.0)
    assert witness == HalfPlanePoint.of(1j, -2 + 2j)
    with pytest.raises(WitnessConstructionError):
        sigma_witness([[1.0], [2.0]], [0.0, 0.0], 1, 2, -2.0)
    with pytest.raises(WitnessConstructionError):
        sigma_witness([[1.0], [3.0]], [0.0, 0.0], 1, 2, 2.0)
    with pytest.raises(WitnessConstructionError):
        sigma_witness([[1.0], [1.0]], [0.0, 0.0], 1, 1, 1.0)


def test_strip_witness() -> None:
    """Test the strip witness and its preconditions."""
    witness = strip_witness(1.0, -1.0, 1.0)
    assert witness.z[0].real == 0.0
    assert witness.z[1].real == 2.0
    assert witness.z[0].imag == pytest.approx(witness.z[1].imag)
    with pytest.raises(WitnessConstructionError):
        strip_witness(0.0, -1.0, 1.0)
    with pytest.raises(WitnessConstructionError):
        strip_witness(1.0, 1.0, 1.0)


def test_region_contains() -> None:
    """Test membership for strips, images and crosses."""
    strip = catalog.strip_region(1.0, -1.0, 0.0)
    assert region_contains(strip, [0.0, -0.5])
    assert not region_contains(strip, [0.0, 0.5])
    moved = transform_region(catalog.strip_region(1.0, -1.0, 1.0), 1)
    assert region_contains(moved, [1.0, -1.5])
    assert not region_contains(moved, [1.0, 0.5])
    assert not region_contains(moved, [0.0, 0.0])
    assert region_contains(CROSS, [0.0, 0.0])
    assert not region_contains(CROSS, [1.5, 0.0])
    assert region_contains(catalog.anti_diagonal_region(), [2.0, -2.0])


def test_box_cross() -> None:
    """Test the cross complement built around a box."""
    cross = box_cross(catalog.first_quadrant())
    assert cross is not None
    assert cross.covered_axes == {1, 2}
    assert region_contains(cross, [0.0, 5.0])
    assert box_cross(BoxRegion(n=2, lower=(0.0, None), upper=(None, None))) is None


def test_cross_transport_bounds_support() -> None:
    """Test that transporting a measure inside the cross gives bounded support."""
    cross = box_cross(catalog.first_quadrant())
    assert cross is not None
    moved = cross_transport(catalog.point_mass([3.0, 4.0]), cross)
    assert truncated_mass(moved, 1.0) == pytest.approx(truncated_mass(moved, 100.0))
    assert truncated_mass(moved, 1.0) > 0
    with pytest.raises(ValueError):
        cross_transport(catalog.point_mass([0.0]), cross)
    with pytest.raises(ValueError):
        partial = CrossComplementRegion(n=2, strips=(AxisInterval(axis=1, lower=1.0, upper=2.0),))
        cross_transport(catalog.point_mass([0.0, 0.0]), partial)


def test_verdict_validation() -> None:
    """Test that forbidden verdicts need a rule and rows or strips need a witness."""
    with pytest.raises(ValueError):
        Verdict(status=VerdictStatus.FORBIDDEN)
    with pytest.raises(ValueError):
        Verdict(status=VerdictStatus.FORBIDDEN, citation="Thm 3.14")
    with pytest.raises(ValueError):
        Verdict(status=VerdictStatus.FORBIDDEN, rule=Rule.POSITIVE_SLOPE_STRIP)
    verdict = Verdict(status=VerdictStatus.FORBIDDEN, rule=Rule.COORDINATE_CROSS)
    assert verdict.citation == "Thm 3.23"


def test_every_rule_is_cited() -> None:
    """Test the citation table and that a dumped verdict keeps rule and citation."""
    assert set(CITATIONS) == set(Rule)
    verdict = classify(catalog.diagonal_region(2))
    document = verdict.model_dump(mode="json")
    assert document["rule"] == "positive-proportional-rows"
    assert document["citation"] == "Thm 3.11"
    assert Verdict.model_validate(document) == verdict
