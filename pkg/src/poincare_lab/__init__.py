"""Numerical laboratory for uniform Poincare constants on rasterized domains."""

from .grid import (
    DistanceField,
    GridDomain,
    GridSpec,
    ScalarField,
    boundary_cells,
    complement,
    connected_components,
    dilate,
    distance_to_set,
    erode,
    exact_distance_transform,
    load_domain,
    measure,
    save_domain,
)
from .generators import (
    ConeSpec,
    DumbbellSpec,
    LipGraphSpec,
    make_dumbbell,
    make_lip_graph_domain,
    make_named,
    make_tube,
    make_u_eps,
    named_families,
    rasterize_polyline,
)
from .hypotheses import (
    audit_domain,
    check_f3,
    check_h1,
    check_h2,
    check_h3,
    check_tube_annulus,
    graph_strip_measure,
    largest_h2_aperture,
    property_q_curve,
)
from .poincare import (
    AverageScalingReport,
    PoincareEstimate,
    dirichlet_integral,
    estimate_constant_spectral,
    estimate_constant_variational,
    mvt_constant,
    orlicz_char_bound,
    project_zero_mean,
    rayleigh_quotient,
    sup_ratio_over_average,
    verify_proof_estimates,
    witness_estimate,
)
from .clarke import (
    BandScanReport,
    DirectionalDerivativeEstimate,
    critical_band_scan,
    directional_derivative,
    homotopy_surrogate,
)

__version__ = "0.1.0"
