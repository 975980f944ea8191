"""kcross: k-colorings of dense geometric graphs with certified same-color
crossing ratios strictly below 1/k.

Exact integer geometry at the bottom, rational arithmetic everywhere above;
nothing in a certificate is ever rounded.
"""

from .bundles import (
    Bundle,
    BundleParams,
    PipelineStageError,
    build_bundles,
    count_K22,
    find_pairwise_crossing_edges,
    make_bundle,
    noncrossing_pair_floor,
)
from .certificate import (
    Certificate,
    VacuousInstanceError,
    bound_from_certificate,
    end_to_end,
    max_feasible_constants,
    verify_conditions,
)
from .coloring import (
    ColoringStats,
    EdgeColoring,
    bundle_coloring,
    coloring_stats,
    derandomized_coloring,
    random_coloring,
)
from .generate import GeneratorSpec, generate, generate_points
from .geometry import (
    OrderType,
    OrientationSign,
    Point,
    PointSet,
    order_type,
    orientation,
    same_order_type,
    segments_cross,
)
from .graph import (
    CrossingSet,
    GeometricGraph,
    PairDensity,
    bipartite_edges,
    complete_graph,
    convex_polygon_points,
    crossing_set,
    density,
    pair_density,
)
from .regularity import (
    Box,
    BoxPartition,
    PairCheck,
    Regularity,
    box_density,
    epsilon_regular_pair,
    random_balanced_partition,
    regular_box_partition,
    select_dense_regular_box,
    threshold_graph,
    tuple_density,
)
from .sametype import (
    RefineResult,
    SameTypeResult,
    VertexTuplePartition,
    same_type_check,
    same_type_refine,
)

__version__ = "0.1.0"
