"""Re-solving segmented objects flagged by false-merge path evidence."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .lifting import PathEvidence, add_lifted, flagged_objects, lift_paths
from .objective import LiftedProblem, normalize_labels
from .solvers import SolverConfig, get_subproblem, solve

SCOPES = ("object", "global")


@dataclass(frozen=True)
class ResolveResult:
    labeling: tuple[int, ...]
    flagged: tuple[int, ...]
    problem: LiftedProblem


def resolve(
    problem: LiftedProblem,
    labeling: Sequence[int],
    evidence: Sequence[PathEvidence],
    threshold: float = 0.5,
    scope: str = "object",
    config: SolverConfig | None = None,
) -> ResolveResult:
    """Add path-terminal lifted edges for flagged objects and re-solve.

    With ``scope="object"`` each flagged object is cut out as its own
    problem (internal local and lifted edges only) and re-partitioned;
    nodes of other objects keep their assignment. ``scope="global"``
    re-solves the whole problem with the added lifted edges. When nothing
    is flagged the input labeling is returned (normalized).
    """
    if scope not in SCOPES:
        raise ValueError(f"scope must be one of {SCOPES}, got {scope!r}")
    config = config or SolverConfig()
    labels = normalize_labels(labeling)
    if len(labels) != problem.node_count:
        raise ValueError(f"labeling has {len(labels)} entries for {problem.node_count} nodes")
    flagged = flagged_objects(evidence, threshold, labels)
    if not flagged:
        return ResolveResult(labels, (), problem)
    lifted = lift_paths(evidence, threshold, labels, graph=problem.graph)
    augmented = add_lifted(problem, lifted)

    if scope == "global":
        return ResolveResult(solve(augmented, config).labeling, tuple(flagged), augmented)

    out = list(labels)
    fresh = max(labels) + 1
    for obj in flagged:
        sub, nodes = get_subproblem(augmented, [v for v, c in enumerate(labels) if c == obj])
        sub_labels = solve(sub, config).labeling
        for v, c in zip(nodes, sub_labels):
            out[v] = fresh + c
        fresh += max(sub_labels) + 1
    return ResolveResult(normalize_labels(out), tuple(flagged), augmented)
