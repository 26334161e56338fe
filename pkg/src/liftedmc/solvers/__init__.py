"""Minimizers for the lifted multicut energy."""
from __future__ import annotations

from ..objective import LiftedProblem
from ._base import SOLVER_KINDS, SolveResult, SolverConfig, SolverError, canonical_kind
from .exact import solve_exact
from .greedy import solve_gaec
from .hierarchical import (
    HierarchicalConfig,
    get_blocks,
    get_subproblem,
    reduce_problem,
    solve_hierarchical,
)
from .kernighan_lin import solve_kernighan_lin
from .local_search import solve_local_search


def solve(problem: LiftedProblem, config: SolverConfig | None = None) -> SolveResult:
    """Run the flat solver named in ``config``.

    ``hierarchical`` uses :class:`HierarchicalConfig` defaults; call
    :func:`solve_hierarchical` directly to control levels and blocks.
    """
    config = config or SolverConfig()
    if config.kind == "exact":
        return solve_exact(problem, config.exact_max_nodes)
    if config.kind == "gaec":
        return solve_gaec(problem)
    if config.kind == "gaec-ls":
        start = solve_gaec(problem)
        res = solve_local_search(problem, start.labeling, config.local_search_max_sweeps)
        res.diagnostics["solver"] = "gaec-ls"
        return res
    if config.kind == "gaec-kl":
        start = solve_gaec(problem)
        mid = solve_local_search(problem, start.labeling, config.local_search_max_sweeps)
        res = solve_kernighan_lin(problem, mid.labeling)
        res.diagnostics["solver"] = "gaec-kl"
        return res
    return solve_hierarchical(
        problem,
        HierarchicalConfig(
            local_search_max_sweeps=config.local_search_max_sweeps,
            exact_max_nodes=config.exact_max_nodes,
        ),
    )


__all__ = [
    "SOLVER_KINDS",
    "HierarchicalConfig",
    "SolveResult",
    "SolverConfig",
    "SolverError",
    "canonical_kind",
    "get_blocks",
    "get_subproblem",
    "reduce_problem",
    "solve",
    "solve_exact",
    "solve_gaec",
    "solve_hierarchical",
    "solve_kernighan_lin",
    "solve_local_search",
]
