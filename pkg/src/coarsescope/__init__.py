"""coarsescope: coarse-geometry certificates on finite metric spaces.

Covers with Lebesgue/multiplicity/mesh statistics, l1 simplicial
complexes, partition-of-unity maps with quantitative verifiers, skeleton
pushes, the constructive filler, Property A certificates and
asymptotic-dimension-at-scale certificates, all with machine-checkable
JSON verdicts.
"""

from ._kernels import backend_name, set_backend
from .asdim import (
    AsdimCertificate,
    certify_from_cover,
    certify_from_map,
    estimate_upper_bound,
    exhaustive_min_n,
    theorem_b_pipeline,
)
from .covers import Cover, CoverStats, brick_cover, brick_mesh_bound, greedy_cover, member_distance, stats
from .errors import CoarseScopeError
from .filler import (
    FillerResult,
    FillerSchedule,
    build_alpha,
    build_beta,
    build_filler,
    find_schedule,
    merge_cover_by_assignment,
)
from .metric_space import (
    FiniteMetricSpace,
    PointSet,
    ball,
    line_space,
    load_space,
    neighborhood,
    path_graph_space,
    r_components,
)
from .property_a import (
    PropertyAInput,
    SetFamily,
    ball_family,
    build_cx,
    cx_partition,
    property_a_to_pu,
    pu_to_property_a,
    symdiff_ratio,
    worst_ratio,
)
from .pu_maps import (
    DeltaPUCertificate,
    LipschitzReport,
    PUMap,
    VariationReport,
    barycentric_map,
    check_barycentric_bound,
    check_delta_pu,
    check_lipschitz,
    check_variation,
    lebesgue_lower_bound,
    map_lebesgue,
    measure_eps_star,
    measure_lipschitz,
    measure_variation,
    pullback_partition,
    star_preimage_cover,
    variation_to_lipschitz,
)
from .simplicial import Complex, SimplexPoint, carrier, in_skeleton, l1_dist, nerve, star_membership
from .skeleton_push import PushResult, fold_point, push_to_skeleton, tail_mass

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "CoarseScopeError",
    "backend_name",
    "set_backend",
    "FiniteMetricSpace",
    "PointSet",
    "ball",
    "neighborhood",
    "r_components",
    "load_space",
    "line_space",
    "path_graph_space",
    "Cover",
    "CoverStats",
    "stats",
    "member_distance",
    "brick_cover",
    "brick_mesh_bound",
    "greedy_cover",
    "SimplexPoint",
    "Complex",
    "l1_dist",
    "star_membership",
    "carrier",
    "in_skeleton",
    "nerve",
    "PUMap",
    "LipschitzReport",
    "VariationReport",
    "DeltaPUCertificate",
    "check_lipschitz",
    "check_variation",
    "measure_lipschitz",
    "measure_eps_star",
    "measure_variation",
    "variation_to_lipschitz",
    "star_preimage_cover",
    "map_lebesgue",
    "lebesgue_lower_bound",
    "barycentric_map",
    "check_barycentric_bound",
    "check_delta_pu",
    "pullback_partition",
    "PushResult",
    "fold_point",
    "tail_mass",
    "push_to_skeleton",
    "FillerSchedule",
    "find_schedule",
    "build_alpha",
    "merge_cover_by_assignment",
    "build_beta",
    "build_filler",
    "FillerResult",
    "SetFamily",
    "PropertyAInput",
    "symdiff_ratio",
    "worst_ratio",
    "ball_family",
    "build_cx",
    "cx_partition",
    "property_a_to_pu",
    "pu_to_property_a",
    "AsdimCertificate",
    "certify_from_cover",
    "certify_from_map",
    "theorem_b_pipeline",
    "estimate_upper_bound",
    "exhaustive_min_n",
]
