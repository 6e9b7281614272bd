from .chart import DiskPoint, cayley, cayley_inverse, cayley_jacobian, cayley_point
from .curves import TorusRegion, TorusVerdict, classify_torus, torus_curve, torus_region
from .fourier import (
    BlaschkeTerm,
    FourierIndex,
    FourierReport,
    FourierScan,
    blaschke_decompose,
    disk_evaluate,
    evaluate_blaschke,
    mixed_fourier_coefficient,
    mixed_indices,
    scan_fourier,
)
from .measure import (
    TorusBoxDensity,
    TorusHyperplane,
    TorusMeasure,
    TorusPointMass,
    TorusPulledBack,
    choose_chart,
    inverse_transport,
    restrict_torus,
    torus_mass_divergence,
    torus_params,
    transport,
)

__all__ = [
    "BlaschkeTerm",
    "DiskPoint",
    "FourierIndex",
    "FourierReport",
    "FourierScan",
    "TorusBoxDensity",
    "TorusHyperplane",
    "TorusMeasure",
    "TorusPointMass",
    "TorusPulledBack",
    "TorusRegion",
    "TorusVerdict",
    "blaschke_decompose",
    "cayley",
    "cayley_inverse",
    "cayley_jacobian",
    "cayley_point",
    "choose_chart",
    "classify_torus",
    "disk_evaluate",
    "evaluate_blaschke",
    "inverse_transport",
    "mixed_fourier_coefficient",
    "mixed_indices",
    "restrict_torus",
    "scan_fourier",
    "torus_curve",
    "torus_mass_divergence",
    "torus_params",
    "torus_region",
    "transport",
]
