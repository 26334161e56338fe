"""Greedy node-move descent on the lifted multicut energy."""
from __future__ import annotations

from collections import deque
from typing import Sequence

from ..objective import LiftedProblem, energy, normalize_labels, partition_labels
from ._base import SolveResult


def _stays_connected(problem: LiftedProblem, members: set[int], v: int) -> bool:
    rest = members - {v}
    if len(rest) <= 1:
        return True
    start = next(iter(rest))
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in problem.graph.neighbors(x):
            if y in rest and y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == len(rest)


def solve_local_search(
    problem: LiftedProblem, init: Sequence[int], max_sweeps: int = 100
) -> SolveResult:
    """Improve ``init`` by moving single nodes between clusters.

    Each sweep visits nodes in index order and applies the most negative
    energy change among: joining a cluster adjacent through a local edge,
    or becoming a singleton. Moves that would disconnect the node's current
    cluster are skipped. Stops after a sweep without moves or after
    ``max_sweeps`` sweeps. ``diagnostics["sweep_energies"]`` records the
    energy before the first sweep and after each one.
    """
    g = problem.graph
    n = problem.node_count
    labels = list(partition_labels(g, init))
    members: dict[int, set[int]] = {}
    for v, c in enumerate(labels):
        members.setdefault(c, set()).add(v)
    next_label = max(labels) + 1

    incident: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (u, v), w in zip(g.edges, problem.local_weights):
        incident[u].append((v, w))
        incident[v].append((u, w))
    for (u, v), w in zip(problem.lifted_edges, problem.lifted_weights):
        incident[u].append((v, w))
        incident[v].append((u, w))

    current = energy(problem, labels)
    sweep_energies = [current]
    for _ in range(max_sweeps):
        moved = False
        for v in range(n):
            own = labels[v]
            # joined weight of v towards each cluster; moving from A to B
            # changes the energy by  joined[A] - joined[B]
            joined: dict[int, float] = {}
            for u, w in incident[v]:
                joined[labels[u]] = joined.get(labels[u], 0.0) + w
            stay = joined.get(own, 0.0)
            targets = sorted({labels[u] for u in g.neighbors(v)} - {own})
            best_delta, best_target = 0.0, None
            for c in targets:
                delta = stay - joined.get(c, 0.0)
                if delta < best_delta:
                    best_delta, best_target = delta, c
            if len(members[own]) > 1 and stay < best_delta:
                best_delta, best_target = stay, -1
            if best_target is None:
                continue
            if not _stays_connected(problem, members[own], v):
                continue
            if best_target == -1:
                best_target = next_label
                next_label += 1
                members[best_target] = set()
            members[own].discard(v)
            if not members[own]:
                del members[own]
            members[best_target].add(v)
            labels[v] = best_target
            moved = True
        current = energy(problem, labels)
        sweep_energies.append(current)
        if not moved:
            break

    labeling = normalize_labels(labels)
    return SolveResult(
        labeling,
        energy(problem, labeling),
        {"solver": "local-search", "sweep_energies": sweep_energies},
    )
