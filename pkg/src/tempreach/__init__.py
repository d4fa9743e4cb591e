"""Windowed temporal reachability and reachability-bounding deletion."""

from .graph import (
    GraphError,
    TemporalGraph,
    TimeEdge,
    build,
    degree_summary,
    delete_edges,
    delete_time_edges,
    edge_key,
)
from .reach import (
    ReachabilityQuery,
    ReachReport,
    max_reachability,
    reach_report,
    reach_set,
    reach_size,
)
from .solvers import (
    DeletionInstance,
    DeletionSolution,
    Status,
    Variant,
    solve,
    solve_bnb,
    solve_exhaustive,
    verify_solution,
)

__version__ = "0.1.0"

__all__ = [
    "GraphError",
    "TemporalGraph",
    "TimeEdge",
    "build",
    "degree_summary",
    "delete_edges",
    "delete_time_edges",
    "edge_key",
    "ReachabilityQuery",
    "ReachReport",
    "max_reachability",
    "reach_report",
    "reach_set",
    "reach_size",
    "DeletionInstance",
    "DeletionSolution",
    "Status",
    "Variant",
    "solve",
    "solve_bnb",
    "solve_exhaustive",
    "verify_solution",
]
