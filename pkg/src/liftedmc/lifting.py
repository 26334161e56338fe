"""Turn node-level domain knowledge into sparse lifted edges.

Each builder returns a :class:`LiftedEdgeSet`; sets are combined with
:func:`merge_lifted_sets` and attached to a problem with :func:`add_lifted`.
Pairs that happen to coincide with a local edge are kept and marked in
``parallel``; :func:`add_lifted` folds them into the local weights.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .graph import Graph, graph_distance_pairs
from .objective import LiftedProblem, fold_parallel_lifted, prob_to_weight

CLASS_REPULSION = "class-repulsion"
COMPONENT_ATTRACTION = "component-attraction"
COMPONENT_REPULSION = "component-repulsion"
PATH_EVIDENCE = "path-evidence"
DENSE_CANDIDATE = "dense-candidate"


@dataclass(frozen=True)
class PathEvidence:
    """A path inside a segmented object and its false-merge probability."""

    path: tuple[int, ...]
    merge_probability: float

    def __post_init__(self):
        path = tuple(int(v) for v in self.path)
        if len(path) < 2:
            raise ValueError("a path needs at least two nodes")
        if any(a == b for a, b in zip(path, path[1:])):
            raise ValueError(f"consecutive repeated node in path {path}")
        if path[0] == path[-1]:
            raise ValueError(f"path terminals coincide: {path}")
        p = float(self.merge_probability)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"merge probability {p} outside [0, 1]")
        object.__setattr__(self, "path", path)
        object.__setattr__(self, "merge_probability", p)

    @property
    def terminals(self) -> tuple[int, int]:
        a, b = self.path[0], self.path[-1]
        return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class LiftedEdgeSet:
    pairs: tuple[tuple[int, int], ...] = ()
    weights: tuple[float, ...] = ()
    provenance: tuple[tuple[str, ...], ...] = ()
    parallel: tuple[bool, ...] = field(default=())

    def __post_init__(self):
        n = len(self.pairs)
        if len(self.weights) != n or len(self.provenance) != n:
            raise ValueError("pairs, weights and provenance must have equal length")
        if not self.parallel:
            object.__setattr__(self, "parallel", (False,) * n)
        elif len(self.parallel) != n:
            raise ValueError("parallel flags must match pairs")
        if len(set(self.pairs)) != n:
            raise ValueError("duplicate pair in lifted edge set")

    def __len__(self):
        return len(self.pairs)

    def as_dict(self) -> dict[tuple[int, int], float]:
        return dict(zip(self.pairs, self.weights))


def _check_attribution(graph: Graph, attribution: Mapping[int, int]) -> list[tuple[int, int]]:
    items = sorted((int(v), int(c)) for v, c in attribution.items())
    for v, c in items:
        if not 0 <= v < graph.node_count:
            raise ValueError(f"attributed node {v} not in graph")
        if c < 0:
            raise ValueError(f"class id must be non-negative, got {c} for node {v}")
    return items


def _budgeted(candidates, budget: int, seed: int):
    """Seeded uniform subsample of candidate pairs with a per-node degree cap."""
    if budget < 1:
        raise ValueError(f"per_node_budget must be >= 1, got {budget}")
    rng = np.random.default_rng(seed)
    degree: dict[int, int] = {}
    chosen = []
    for i in rng.permutation(len(candidates)):
        u, v = candidates[i][0]
        if degree.get(u, 0) < budget and degree.get(v, 0) < budget:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
            chosen.append(candidates[i])
    chosen.sort()
    return chosen


def _edge_set(graph: Graph | None, chosen) -> LiftedEdgeSet:
    return LiftedEdgeSet(
        tuple(p for p, _, _ in chosen),
        tuple(w for _, w, _ in chosen),
        tuple((tag,) for _, _, tag in chosen),
        tuple(graph is not None and graph.has_edge(*p) for p, _, _ in chosen),
    )


def lift_class_repulsion(
    graph: Graph,
    attribution: Mapping[int, int],
    repulsion_weight: float,
    per_node_budget: int = 8,
    seed: int = 0,
    pair_weights: Mapping[tuple[int, int], float] | None = None,
) -> LiftedEdgeSet:
    """Repulsive lifted edges between nodes attributed to different classes.

    Every emitted edge has weight ``-repulsion_weight`` unless
    ``pair_weights`` supplies a signed weight for that (sorted) pair.
    """
    if repulsion_weight <= 0:
        raise ValueError("repulsion_weight must be positive")
    items = _check_attribution(graph, attribution)
    pair_weights = pair_weights or {}
    candidates = []
    for i, (u, cu) in enumerate(items):
        for v, cv in items[i + 1:]:
            if cu != cv:
                w = pair_weights.get((u, v), -float(repulsion_weight))
                candidates.append(((u, v), float(w), CLASS_REPULSION))
    return _edge_set(graph, _budgeted(candidates, per_node_budget, seed))


def lift_components(
    graph: Graph,
    components: Mapping[int, int],
    attractive_weight: float,
    repulsive_weight: float,
    per_node_budget: int = 8,
    seed: int = 0,
) -> LiftedEdgeSet:
    """Attractive edges within a component id, repulsive edges across ids."""
    if attractive_weight <= 0 or repulsive_weight <= 0:
        raise ValueError("attractive_weight and repulsive_weight must be positive")
    items = _check_attribution(graph, components)
    candidates = []
    for i, (u, cu) in enumerate(items):
        for v, cv in items[i + 1:]:
            if cu == cv:
                candidates.append(((u, v), float(attractive_weight), COMPONENT_ATTRACTION))
            else:
                candidates.append(((u, v), -float(repulsive_weight), COMPONENT_REPULSION))
    return _edge_set(graph, _budgeted(candidates, per_node_budget, seed))


def flagged_objects(
    evidence: Sequence[PathEvidence], flagging_threshold: float, object_of
) -> list[int]:
    """Object ids owning at least one path above the threshold, sorted."""
    if not 0.0 < flagging_threshold < 1.0:
        raise ValueError(f"flagging_threshold must lie in (0, 1), got {flagging_threshold}")
    flagged = set()
    for ev in evidence:
        owners = {object_of[v] for v in ev.path}
        if len(owners) != 1:
            raise ValueError(f"path {ev.path} crosses object boundary (objects {sorted(owners)})")
        if ev.merge_probability > flagging_threshold:
            flagged.add(owners.pop())
    return sorted(flagged)


def lift_paths(
    evidence: Sequence[PathEvidence],
    flagging_threshold: float,
    object_of,
    graph: Graph | None = None,
    eps: float | None = None,
) -> LiftedEdgeSet:
    """Lifted edges between path terminals of objects flagged as false merges.

    ``object_of`` maps node -> object id (a dict or a per-node sequence).
    Every path of a flagged object contributes, not only those above the
    threshold; terminal pairs shared by several paths sum their weights.
    """
    flagged = set(flagged_objects(evidence, flagging_threshold, object_of))
    kwargs = {} if eps is None else {"eps": eps}
    acc: dict[tuple[int, int], float] = {}
    for ev in evidence:
        if object_of[ev.path[0]] in flagged:
            pair = ev.terminals
            acc[pair] = acc.get(pair, 0.0) + prob_to_weight(ev.merge_probability, **kwargs)
    chosen = sorted((p, w, PATH_EVIDENCE) for p, w in acc.items())
    return _edge_set(graph, chosen)


def lift_dense(graph: Graph, max_distance: int, weights: Sequence[float]) -> LiftedEdgeSet:
    """Lifted edges for all pairs at graph distance 2..max_distance.

    ``weights`` follow the candidate order of
    :func:`~liftedmc.graph.graph_distance_pairs`.
    """
    cands = graph_distance_pairs(graph, max_distance)
    if len(weights) != len(cands):
        raise ValueError(f"{len(weights)} weights for {len(cands)} dense candidates")
    return LiftedEdgeSet(
        tuple((u, v) for u, v, _ in cands),
        tuple(float(w) for w in weights),
        ((DENSE_CANDIDATE,),) * len(cands),
    )


def merge_lifted_sets(sets: Sequence[LiftedEdgeSet]) -> LiftedEdgeSet:
    """Union of edge sets; repeated pairs sum weights and collect tags."""
    weights: dict[tuple[int, int], float] = {}
    tags: dict[tuple[int, int], list[str]] = {}
    parallel: dict[tuple[int, int], bool] = {}
    for s in sets:
        for pair, w, prov, par in zip(s.pairs, s.weights, s.provenance, s.parallel):
            weights[pair] = weights.get(pair, 0.0) + w
            seen = tags.setdefault(pair, [])
            seen.extend(t for t in prov if t not in seen)
            parallel[pair] = parallel.get(pair, False) or par
    return LiftedEdgeSet(
        tuple(weights),
        tuple(weights.values()),
        tuple(tuple(tags[p]) for p in weights),
        tuple(parallel[p] for p in weights),
    )


def add_lifted(problem: LiftedProblem, edges: LiftedEdgeSet) -> LiftedProblem:
    """Attach lifted edges to a problem, folding parallels and duplicates."""
    raw = problem.with_lifted(
        problem.lifted_edges + edges.pairs,
        problem.lifted_weights + edges.weights,
        allow_parallel=True,
    )
    return fold_parallel_lifted(raw)
