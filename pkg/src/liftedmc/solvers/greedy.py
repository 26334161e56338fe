"""Greedy additive edge contraction adapted to lifted edges."""
from __future__ import annotations

import heapq

from ..graph import DisjointSet
from ..objective import LiftedProblem, energy
from ._base import SolveResult


def solve_gaec(problem: LiftedProblem) -> SolveResult:
    """Contract the most attractive local edge until none is positive.

    Clusters are named by their smallest node id. Merging two clusters sums
    their parallel local edges, folds lifted edges that now coincide with a
    local edge into it, and drops lifted edges internal to the new cluster.
    Ties on weight go to the lexicographically smallest cluster pair, which
    is the smallest edge index before any contraction.
    """
    n = problem.node_count
    local: list[dict[int, float]] = [{} for _ in range(n)]
    lifted: list[dict[int, float]] = [{} for _ in range(n)]
    for (u, v), w in zip(problem.graph.edges, problem.local_weights):
        local[u][v] = w
        local[v][u] = w
    for (u, v), w in zip(problem.lifted_edges, problem.lifted_weights):
        lifted[u][v] = w
        lifted[v][u] = w

    heap = [(-w, u, v) for (u, v), w in zip(problem.graph.edges, problem.local_weights) if w > 0]
    heapq.heapify(heap)
    ds = DisjointSet(n)
    alive = [True] * n
    n_contractions = 0

    while heap:
        negw, a, b = heapq.heappop(heap)
        if not (alive[a] and alive[b]) or local[a].get(b) != -negw:
            continue
        keep, gone = a, b  # a < b, so the survivor keeps the smallest id
        ds.union(keep, gone)
        alive[gone] = False
        n_contractions += 1

        new_local: dict[int, float] = {}
        for c, w in (*local[keep].items(), *local[gone].items()):
            if c != keep and c != gone:
                new_local[c] = new_local.get(c, 0.0) + w
        new_lifted: dict[int, float] = {}
        for c, w in (*lifted[keep].items(), *lifted[gone].items()):
            if c == keep or c == gone:
                continue
            if c in new_local:
                new_local[c] += w
            else:
                new_lifted[c] = new_lifted.get(c, 0.0) + w

        for c in local[gone]:
            local[c].pop(gone, None)
        for c in local[keep]:
            local[c].pop(keep, None)
        for c in lifted[gone]:
            lifted[c].pop(gone, None)
        for c in lifted[keep]:
            lifted[c].pop(keep, None)
        local[gone], lifted[gone] = {}, {}
        local[keep], lifted[keep] = new_local, new_lifted
        for c, w in new_local.items():
            local[c][keep] = w
            if w > 0:
                heapq.heappush(heap, (-w, min(c, keep), max(c, keep)))
        for c, w in new_lifted.items():
            lifted[c][keep] = w

    labeling = ds.labels()
    return SolveResult(
        labeling, energy(problem, labeling), {"solver": "gaec", "contractions": n_contractions}
    )
