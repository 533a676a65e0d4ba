"""graphforge: tabular-to-graph dataset construction with oracle validation.

Five proximity-graph constructors (kNN, mutual kNN, shared-nearest-neighbor,
epsilon-radius, Gabriel) over exact nearest-neighbor search, with topology
diagnostics, a canonical on-disk bundle format and a batch CLI.
"""

__version__ = "0.1.0"

from .analysis import TopologyReport, connected_components, topology_report
from .bundle import GraphBundle, read_bundle, write_bundle
from .construct import (
    ConstructionConfig,
    Graph,
    build_graph,
    epsilon_graph,
    gabriel_graph,
    gabriel_pair_test,
    knn_graph,
    mnn_graph,
    snn_graph,
    snn_similarity,
)
from .errors import (
    BundleError,
    CoincidentPointsError,
    ConstructionError,
    DataError,
    DimensionMismatchError,
    GraphForgeError,
)
from .index import (
    NeighborList,
    SpatialIndex,
    brute_force_knn,
    build_index,
    euclidean_distance,
    knn_query,
    range_query,
)
from .ingest import (
    ClassBalanceSpec,
    PointSet,
    ScalerParams,
    dedup,
    load_csv,
    standardize_fit_transform,
    stratified_downsample,
    train_test_split,
)

__all__ = [
    "__version__",
    "ClassBalanceSpec",
    "ConstructionConfig",
    "Graph",
    "GraphBundle",
    "NeighborList",
    "PointSet",
    "ScalerParams",
    "SpatialIndex",
    "TopologyReport",
    "BundleError",
    "CoincidentPointsError",
    "ConstructionError",
    "DataError",
    "DimensionMismatchError",
    "GraphForgeError",
    "brute_force_knn",
    "build_graph",
    "build_index",
    "connected_components",
    "dedup",
    "epsilon_graph",
    "euclidean_distance",
    "gabriel_graph",
    "gabriel_pair_test",
    "knn_graph",
    "knn_query",
    "load_csv",
    "mnn_graph",
    "range_query",
    "read_bundle",
    "snn_graph",
    "snn_similarity",
    "standardize_fit_transform",
    "stratified_downsample",
    "topology_report",
    "train_test_split",
    "write_bundle",
]
