"""Independent sets in the hypercube at desk scale.

Exact counts, the small-set sum, graph containers and isoperimetric
checks for Q_d and other regular bipartite graphs.  Vertex sets are
``int`` bitmasks throughout.
"""

from .census import (
    DyadicRational,
    LogValue,
    asymptotic_estimate,
    count_graph_independent_sets,
    count_independent_sets,
    f_k,
    f_k_lower,
    lower_bound_assembly,
    ratio_table,
    sap_sum,
    upper_bound_check,
)
from .combinatorics import (
    CoverInstance,
    binary_entropy,
    binomial_tail_bound,
    count_k_linked_sets,
    entropy_bound_holds,
    greedy_cover,
    lovasz_stein_bound,
    rooted_subtree_count,
)
from .containers import (
    ContainerParams,
    Reconstruction,
    build_phi_approx,
    container_pipeline,
    container_sweep,
    enumerate_G_agv,
    g_phi,
    psi_refine,
    reconstruct_family,
    run_container,
    verify_phi_approx,
    verify_psi_approx,
)
from .errors import (
    BipartitenessError,
    ConstructionFailure,
    DomainError,
    EnumerationLimitError,
    GraphFormatError,
    GraphParseError,
    HypercubeError,
    InfeasibleCoverError,
    NoPathError,
    PreconditionError,
    RegularityError,
    SizeLimitError,
)
from .graph_core import (
    Hypercube,
    RegularBipartiteGraph,
    build_hypercube,
    co_degree,
    distance,
    format_vertex,
    from_vertices,
    load_graph,
    members,
    nabla,
    neighborhood,
    parse_vertex,
)
from .isoperimetry import (
    boundary_ratio,
    check_small_set_expansion,
    hamming_ball,
    layer_ratio,
    min_neighborhood,
)
from .structure import anchor, closure, is_k_linked, is_small, k_components, set_stats
from .suites import verify_suite

__all__ = [
    "BipartitenessError",
    "ConstructionFailure",
    "ContainerParams",
    "CoverInstance",
    "DomainError",
    "DyadicRational",
    "EnumerationLimitError",
    "GraphFormatError",
    "GraphParseError",
    "Hypercube",
    "HypercubeError",
    "InfeasibleCoverError",
    "LogValue",
    "NoPathError",
    "PreconditionError",
    "Reconstruction",
    "RegularBipartiteGraph",
    "RegularityError",
    "SizeLimitError",
    "anchor",
    "asymptotic_estimate",
    "binary_entropy",
    "binomial_tail_bound",
    "boundary_ratio",
    "build_hypercube",
    "build_phi_approx",
    "check_small_set_expansion",
    "closure",
    "co_degree",
    "container_pipeline",
    "container_sweep",
    "count_graph_independent_sets",
    "count_independent_sets",
    "count_k_linked_sets",
    "distance",
    "entropy_bound_holds",
    "enumerate_G_agv",
    "f_k",
    "f_k_lower",
    "format_vertex",
    "from_vertices",
    "g_phi",
    "greedy_cover",
    "hamming_ball",
    "is_k_linked",
    "is_small",
    "k_components",
    "layer_ratio",
    "load_graph",
    "lovasz_stein_bound",
    "lower_bound_assembly",
    "members",
    "min_neighborhood",
    "nabla",
    "neighborhood",
    "parse_vertex",
    "psi_refine",
    "ratio_table",
    "reconstruct_family",
    "rooted_subtree_count",
    "run_container",
    "sap_sum",
    "set_stats",
    "upper_bound_check",
    "verify_phi_approx",
    "verify_psi_approx",
    "verify_suite",
]

__version__ = "0.1.0"
