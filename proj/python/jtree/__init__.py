"""Junction trees built by cluster-graph transformations."""

from ._jtree import (
    ClusterGraph,
    Error,
    FormatError,
    InvariantError,
    Network,
    NetworkError,
    PreconditionError,
    Session,
    brute_force_optimal_cost,
    build,
    generate_network,
    generate_polytree,
    preset_names,
    reference_elimination_cost,
    run_preset,
)

__all__ = [
    "ClusterGraph",
    "Error",
    "FormatError",
    "InvariantError",
    "Network",
    "NetworkError",
    "PreconditionError",
    "Session",
    "brute_force_optimal_cost",
    "build",
    "generate_network",
    "generate_polytree",
    "preset_names",
    "reference_elimination_cost",
    "run_preset",
]
