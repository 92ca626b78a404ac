"""Half-plane surfaces: meromorphic quadratic differentials with higher order poles
built by gluing Euclidean half-planes along their boundaries."""

from .analytic import (
    LaurentQD,
    PowerSeriesMap,
    analytic_residue,
    circumference,
    h_schedule,
    leading_order_pullback,
    planar_end_model,
    scaling_exponent,
    truncation_polygon,
)
from .builders import (
    MetricTree,
    attach_pole,
    from_metric_tree,
    generic_edge_count_check,
    interval_exchange_surface,
    linear_involution_surface,
    monomial_surface,
    path_tree,
    search_exchange,
    segment_tree,
    slit_reglue,
    standard_plane,
    truncation_core,
    zigzag_tree,
)
from .degeneration import (
    SpineFamily,
    check_forest,
    collapse,
    collapsing_locus,
    diverging_locus,
    limit_surface,
    stretch_map,
    with_lengths,
)
from .flat import (
    FlatComplex,
    glue_planar_end,
    horizontal_cylinder_decomposition,
    truncation_complex,
    quadruple,
    single_rectangle,
    validate_polygonal_boundary,
)
from .hpsformat import emit_hps, parse_hps
from .render import render_svg
from .report import report
from .surface import (
    BoundaryInterval,
    GluingPairing,
    HalfPlane,
    HalfPlaneSurface,
    build_surface,
    develop,
    end_path,
    ends,
    euler_characteristic,
    gauss_bonnet_check,
    genus,
    spine,
    surface_from_cuts,
    zeros,
)

__version__ = "0.1.0"
