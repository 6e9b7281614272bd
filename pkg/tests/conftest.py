from pathlib import Path

import pytest
from click.testing import CliRunner

from nevanlinna.core import catalog
from nevanlinna.core.measure import Measure
from nevanlinna.core.quadrature import QuadratureSpec

SCENES = Path(__file__).parent.parent / "scenes"


@pytest.fixture()
def spec() -> QuadratureSpec:
    return QuadratureSpec(abs_tol=1e-9, rel_tol=1e-9)


@pytest.fixture()
def loose_spec() -> QuadratureSpec:
    return QuadratureSpec(abs_tol=1e-7, rel_tol=1e-7)


@pytest.fixture()
def scenes_dir() -> Path:
    return SCENES


@pytest.fixture()
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture()
def minus_one_over_z() -> Measure:
    """``pi * delta_0`` on the real line, the measure of ``-1/z``."""
    return catalog.point_mass([0.0])


@pytest.fixture()
def anti_diagonal() -> Measure:
    return catalog.anti_diagonal()


@pytest.fixture()
def hyperplane_measure() -> Measure:
    """``3 pi`` times Lebesgue measure on ``t1 = 2`` in the plane."""
    return catalog.hyperplane(2, axis=1, offset=2.0, constant=3.0)
