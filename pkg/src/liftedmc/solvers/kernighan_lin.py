"""Two-cluster Kernighan-Lin refinement with joins.

For a pair of adjacent clusters (or a cluster and an empty one, which
allows splits) a tentative sequence of single-node transfers across the
shared boundary is built greedily, each node moving at most once, and
the best prefix of the sequence is kept. Joining the two clusters outright
is considered as well. A candidate change is accepted only if the energy
of the resulting partition, with any cluster that fell apart read as its
connected pieces, is strictly lower.
"""
from __future__ import annotations

from typing import Sequence

from ..objective import LiftedProblem, energy, normalize_labels, partition_labels
from ._base import SolveResult

_EPS = 1e-9
_NEW = -1


class _State:
    def __init__(self, problem: LiftedProblem, labels):
        g = problem.graph
        self.problem = problem
        self.labels = list(labels)
        self.local_nbrs = [g.neighbors(v) for v in range(problem.node_count)]
        self.incident: list[list[tuple[int, float]]] = [[] for _ in range(problem.node_count)]
        for (u, v), w in zip(g.edges, problem.local_weights):
            self.incident[u].append((v, w))
            self.incident[v].append((u, w))
        for (u, v), w in zip(problem.lifted_edges, problem.lifted_weights):
            self.incident[u].append((v, w))
            self.incident[v].append((u, w))
        self.energy = energy(problem, self.labels)

    def members(self):
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.labels):
            out.setdefault(c, []).append(v)
        return out

    def adjacent_pairs(self):
        pairs = set()
        for u, v in self.problem.graph.edges:
            a, b = self.labels[u], self.labels[v]
            if a != b:
                pairs.add((min(a, b), max(a, b)))
        return sorted(pairs)

    def try_accept(self, candidate) -> bool:
        # pieces of a split cluster get fresh ids; other ids stay put
        pieces = partition_labels(self.problem.graph, candidate)
        owner: dict[int, int] = {}
        taken: set[int] = set()
        fresh = max(candidate) + 1
        labels = []
        for v, p in enumerate(pieces):
            if p not in owner:
                if candidate[v] in taken:
                    owner[p] = fresh
                    fresh += 1
                else:
                    owner[p] = candidate[v]
                    taken.add(candidate[v])
            labels.append(owner[p])
        e = energy(self.problem, labels)
        if e < self.energy - _EPS:
            self.labels = list(labels)
            self.energy = e
            return True
        return False

    def refine_pair(self, a: int, b: int, members) -> bool:
        nodes = list(members[a]) + (list(members[b]) if b != _NEW else [])
        side = {v: (0 if self.labels[v] == a else 1) for v in nodes}
        incident = self.incident

        def gain(v):
            own, other = 0.0, 0.0
            for u, w in incident[v]:
                s = side.get(u)
                if s is None:
                    continue
                if s == side[v]:
                    own += w
                else:
                    other += w
            return other - own

        join_gain = 0.0
        if b != _NEW:
            for v in members[a]:
                for u, w in incident[v]:
                    if side.get(u) == 1:
                        join_gain += w

        moved: set[int] = set()
        sequence = []
        total = best = 0.0
        best_k = 0
        for _ in range(len(nodes)):
            has_other = {0: False, 1: False}
            for v in nodes:
                has_other[side[v]] = True
            if b == _NEW and not has_other[1]:
                frontier = [v for v in nodes if v not in moved]
            else:
                frontier = [
                    v for v in nodes
                    if v not in moved and any(side.get(u, side[v]) != side[v] for u in self.local_nbrs[v])
                ]
            if not frontier:
                break
            gains = [(gain(v), -v) for v in frontier]
            g, negv = max(gains)
            v = -negv
            side[v] ^= 1
            moved.add(v)
            sequence.append(v)
            total += g
            if total > best + _EPS:
                best, best_k = total, len(sequence)

        if max(best, join_gain) <= _EPS:
            return False
        candidate = list(self.labels)
        if join_gain > best:
            for v in members[b]:
                candidate[v] = a
        else:
            fresh = max(self.labels) + 1
            target = {0: a, 1: b if b != _NEW else fresh}
            for v in sequence[:best_k]:
                candidate[v] = target[1 - (0 if self.labels[v] == a else 1)]
        return self.try_accept(candidate)


def solve_kernighan_lin(
    problem: LiftedProblem, init: Sequence[int], max_rounds: int = 20
) -> SolveResult:
    """Refine ``init`` with two-cluster transfer sequences, joins and splits.

    Each round visits every pair of adjacent clusters, then every cluster
    paired with an empty one. Stops after a round without improvement or
    after ``max_rounds`` rounds.
    """
    state = _State(problem, partition_labels(problem.graph, init))
    round_energies = [state.energy]
    for _ in range(max_rounds):
        improved = False
        for a, b in state.adjacent_pairs():
            members = state.members()
            if a in members and b in members:
                improved |= state.refine_pair(a, b, members)
        for a in sorted(state.members()):
            members = state.members()
            if a in members and len(members[a]) > 1:
                improved |= state.refine_pair(a, _NEW, members)
        round_energies.append(state.energy)
        if not improved:
            break
    labeling = normalize_labels(state.labels)
    return SolveResult(
        labeling,
        energy(problem, labeling),
        {"solver": "kernighan-lin", "round_energies": round_energies},
    )
