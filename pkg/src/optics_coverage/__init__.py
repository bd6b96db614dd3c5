"""Sensor-network coverage toolkit.

Clusters deployed sensor positions with a density-based ordering
algorithm, then activates a small per-cluster working set through an
acceptance-level protocol with overlap-aware geometry, and reports
active-node ratios and coverage estimates over sleep/wake rounds.
"""

from .geometry import (
    CoLocatedSensorsError,
    Disc,
    OverlapResult,
    Point2D,
    disc_contains,
    euclidean_distance,
    non_overlapped_perimeter,
    overlap,
    overlap_angle,
)
from .metrics import (
    ExperimentSummary,
    RoundReport,
    active_ratio,
    analytic_cr,
    coverage_grid,
    grid_cr,
    summarize_experiment,
)
from .network import (
    Deployment,
    NeighborTable,
    SensorNode,
    build_neighbor_table,
    drain_battery,
    generate_deployment,
    send_req,
)
from .optics import (
    Cluster,
    ClusterAssignment,
    OpticsParams,
    OrderedPoint,
    core_distance,
    extract_clusters,
    optics_order,
    reachability_distance,
)
from .protocol import (
    AcceptanceLevel,
    AllNodesDeadError,
    ProtocolConfig,
    RoundState,
    SelectionTree,
    acceptance_level,
    choose_initial_sensor,
    cover_cluster,
    initial_round_state,
    iterate_rounds,
    run_round,
    run_simulation,
    select_next,
)

__all__ = [
    "AcceptanceLevel",
    "AllNodesDeadError",
    "Cluster",
    "ClusterAssignment",
    "CoLocatedSensorsError",
    "Deployment",
    "Disc",
    "ExperimentSummary",
    "NeighborTable",
    "OpticsParams",
    "OrderedPoint",
    "OverlapResult",
    "Point2D",
    "ProtocolConfig",
    "RoundReport",
    "RoundState",
    "SelectionTree",
    "SensorNode",
    "acceptance_level",
    "active_ratio",
    "analytic_cr",
    "build_neighbor_table",
    "choose_initial_sensor",
    "core_distance",
    "cover_cluster",
    "coverage_grid",
    "disc_contains",
    "drain_battery",
    "euclidean_distance",
    "extract_clusters",
    "generate_deployment",
    "grid_cr",
    "initial_round_state",
    "iterate_rounds",
    "non_overlapped_perimeter",
    "optics_order",
    "overlap",
    "overlap_angle",
    "reachability_distance",
    "run_round",
    "run_simulation",
    "select_next",
    "send_req",
    "summarize_experiment",
]
