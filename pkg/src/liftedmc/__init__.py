"""Lifted multicut graph partitioning with sparse domain-knowledge edges."""
from .estimators import HierarchicalLiftedMulticut, LiftedMulticut
from .graph import (
    ContractionResult,
    Graph,
    GraphError,
    build_graph,
    connected_components,
    contract,
    graph_distance_pairs,
)
from .lifting import (
    LiftedEdgeSet,
    PathEvidence,
    add_lifted,
    lift_class_repulsion,
    lift_components,
    lift_dense,
    lift_paths,
    merge_lifted_sets,
)
from .metrics import MetricReport, adapted_rand_error, contingency, evaluate, vi
from .objective import (
    EdgeLabeling,
    FeasibilityReport,
    LiftedProblem,
    check_feasible,
    energy,
    fold_parallel_lifted,
    induced_edge_labels,
    normalize_labels,
    prob_to_weight,
)
from .pipeline import resolve
from .solvers import (
    HierarchicalConfig,
    SolveResult,
    SolverConfig,
    solve,
    solve_exact,
    solve_gaec,
    solve_hierarchical,
    solve_kernighan_lin,
    solve_local_search,
)
from .synthgen import (
    BridgedInstance,
    PlantedConfig,
    PlantedInstance,
    gen_bridged,
    gen_planted,
    oracle_paths,
)

__all__ = [
    "BridgedInstance",
    "ContractionResult",
    "EdgeLabeling",
    "FeasibilityReport",
    "Graph",
    "GraphError",
    "HierarchicalConfig",
    "HierarchicalLiftedMulticut",
    "LiftedEdgeSet",
    "LiftedMulticut",
    "LiftedProblem",
    "MetricReport",
    "PathEvidence",
    "PlantedConfig",
    "PlantedInstance",
    "SolveResult",
    "SolverConfig",
    "adapted_rand_error",
    "add_lifted",
    "build_graph",
    "check_feasible",
    "connected_components",
    "contingency",
    "contract",
    "energy",
    "evaluate",
    "fold_parallel_lifted",
    "gen_bridged",
    "gen_planted",
    "graph_distance_pairs",
    "induced_edge_labels",
    "lift_class_repulsion",
    "lift_components",
    "lift_dense",
    "lift_paths",
    "merge_lifted_sets",
    "normalize_labels",
    "oracle_paths",
    "prob_to_weight",
    "resolve",
    "solve",
    "solve_exact",
    "solve_gaec",
    "solve_hierarchical",
    "solve_kernighan_lin",
    "solve_local_search",
    "vi",
]

__version__ = "0.1.0"
