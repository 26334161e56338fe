"""Lifted multicut objective: weights, energies and feasibility.

Edge state convention: ``y = 0`` joins the endpoints, ``y = 1`` separates
them. Positive weights are attractive, negative weights repulsive, and the
objective ``sum(w_e * y_e)`` over local and lifted edges is minimized.
"""
from __future__ import annotations

import math
from dataclasses import InitVar, dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .graph import Graph, connected_components

DEFAULT_EPS = 1e-6

CUT_BUT_CONNECTED = "cut-but-connected"
JOINED_BUT_DISCONNECTED = "joined-but-disconnected"


class ProblemError(ValueError):
    """Raised when a lifted problem violates its structural invariants."""


def prob_to_weight(p, eps: float = DEFAULT_EPS):
    """Map a cut probability to a signed edge weight, ``log((1 - p) / p)``.

    Probabilities are clamped to ``[eps, 1 - eps]`` so hard 0/1 inputs give
    finite weights. Accepts scalars (returns ``float``) or array-likes.
    """
    arr = np.asarray(p, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"probability must be finite, got {p!r}")
    arr = np.clip(arr, eps, 1.0 - eps)
    # Evaluate both halves through the upper one, where 1 - q is exact in
    # floating point: then w(p) == -w(1 - p) holds bit for bit.
    upper = np.where(arr > 0.5, arr, 1.0 - arr)
    w_upper = np.log(1.0 - upper) - np.log(upper)
    w = np.where(arr > 0.5, w_upper, -w_upper) + 0.0  # no negative zero at p = 0.5
    if w.ndim == 0:
        return float(w)
    return w


def normalize_labels(labels: Iterable[int]) -> tuple[int, ...]:
    """Renumber labels to ``0, 1, 2, ...`` in order of first occurrence."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(int(x), len(seen)) for x in labels)


@dataclass(frozen=True)
class LiftedProblem:
    """Graph with local weights, lifted edges and an optional spatial embedding.

    ``local_weights[i]`` belongs to ``graph.edges[i]``. Lifted pairs are
    stored canonically (``u < v``, sorted) with their weights permuted to
    match. Unless ``allow_parallel`` is set, lifted pairs must not repeat,
    touch a single node, or coincide with a local edge; the permissive form
    exists as input to :func:`fold_parallel_lifted`.
    """

    graph: Graph
    local_weights: tuple[float, ...]
    lifted_edges: tuple[tuple[int, int], ...] = ()
    lifted_weights: tuple[float, ...] = ()
    coordinates: tuple[tuple[int, int, int], ...] | None = None
    allow_parallel: InitVar[bool] = False

    def __post_init__(self, allow_parallel):
        g = self.graph
        lw = tuple(float(w) for w in self.local_weights)
        if len(lw) != g.n_edges:
            raise ProblemError(f"{len(lw)} local weights for {g.n_edges} edges")
        lifted = [(int(u), int(v)) for u, v in self.lifted_edges]
        fw = [float(w) for w in self.lifted_weights]
        if len(fw) != len(lifted):
            raise ProblemError(f"{len(fw)} lifted weights for {len(lifted)} lifted edges")
        for w in (*lw, *fw):
            if not math.isfinite(w):
                raise ProblemError(f"non-finite weight {w}")
        order = sorted(range(len(lifted)), key=lambda i: tuple(sorted(lifted[i])))
        lifted = [tuple(sorted(lifted[i])) for i in order]
        fw = [fw[i] for i in order]
        for u, v in lifted:
            if not (0 <= u < g.node_count and 0 <= v < g.node_count):
                raise ProblemError(f"lifted edge ({u}, {v}) out of range")
        if not allow_parallel:
            for i, (u, v) in enumerate(lifted):
                if u == v:
                    raise ProblemError(f"lifted self-loop ({u}, {v})")
                if g.has_edge(u, v):
                    raise ProblemError(f"lifted edge ({u}, {v}) duplicates a local edge")
                if i and lifted[i - 1] == (u, v):
                    raise ProblemError(f"duplicate lifted edge ({u}, {v})")
        coords = self.coordinates
        if coords is not None:
            coords = tuple(tuple(int(c) for c in xyz) for xyz in coords)
            if len(coords) != g.node_count or any(len(c) != 3 for c in coords):
                raise ProblemError("coordinates need one (z, y, x) triple per node")
        object.__setattr__(self, "local_weights", lw)
        object.__setattr__(self, "lifted_edges", tuple(lifted))
        object.__setattr__(self, "lifted_weights", tuple(fw))
        object.__setattr__(self, "coordinates", coords)

    @classmethod
    def from_edges(
        cls,
        node_count: int,
        edges: Sequence[Sequence[int]],
        weights: Sequence[float],
        lifted_edges: Sequence[Sequence[int]] = (),
        lifted_weights: Sequence[float] = (),
        coordinates=None,
        allow_parallel: bool = False,
    ) -> "LiftedProblem":
        """Build from local edges in arbitrary order, keeping weights aligned."""
        if len(edges) != len(weights):
            raise ProblemError(f"{len(weights)} weights for {len(edges)} edges")
        graph = Graph(node_count, edges)
        by_pair = {tuple(sorted((int(e[0]), int(e[1])))): float(w) for e, w in zip(edges, weights)}
        return cls(
            graph,
            tuple(by_pair[e] for e in graph.edges),
            tuple(tuple(p) for p in lifted_edges),
            tuple(lifted_weights),
            coordinates,
            allow_parallel=allow_parallel,
        )

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    @property
    def n_lifted(self) -> int:
        return len(self.lifted_edges)

    def with_lifted(self, lifted_edges, lifted_weights, allow_parallel=False) -> "LiftedProblem":
        return LiftedProblem(
            self.graph, self.local_weights, tuple(lifted_edges), tuple(lifted_weights),
            self.coordinates, allow_parallel=allow_parallel,
        )


@dataclass(frozen=True)
class EdgeLabeling:
    local_y: tuple[int, ...]
    lifted_y: tuple[int, ...] = ()


class Violation(NamedTuple):
    edge_kind: str  # "local" or "lifted"
    edge_index: int
    kind: str


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def feasible(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.feasible


def partition_labels(graph: Graph, labels: Sequence[int]) -> tuple[int, ...]:
    """Node partition encoded by ``labels`` on ``graph``.

    Nodes share a component iff they carry the same label *and* are
    connected through nodes of that label. A label class that is split in
    the graph can only be realized as its connected pieces, so every
    labeling is read this way. Output is normalized.
    """
    if len(labels) != graph.node_count:
        raise ValueError(f"labeling has {len(labels)} entries for {graph.node_count} nodes")
    edges = graph.edges
    return connected_components(graph, lambda i: labels[edges[i][0]] == labels[edges[i][1]])


def induced_edge_labels(problem: LiftedProblem, labeling: Sequence[int]) -> EdgeLabeling:
    comp = partition_labels(problem.graph, labeling)
    return EdgeLabeling(
        tuple(int(comp[u] != comp[v]) for u, v in problem.graph.edges),
        tuple(int(comp[u] != comp[v]) for u, v in problem.lifted_edges),
    )


def energy(problem: LiftedProblem, labeling: Sequence[int]) -> float:
    """Objective value of the partition given by ``labeling``.

    Summation runs over local edges then lifted edges, in index order.
    """
    y = induced_edge_labels(problem, labeling)
    total = 0.0
    for w, cut in zip(problem.local_weights, y.local_y):
        if cut:
            total += w
    for w, cut in zip(problem.lifted_weights, y.lifted_y):
        if cut:
            total += w
    return total


def check_feasible(problem: LiftedProblem, edge_labeling: EdgeLabeling) -> FeasibilityReport:
    """Check cycle, path and cut consistency of an edge labeling.

    Components are formed from local edges with ``y = 0``; any edge whose
    state disagrees with "endpoints in different components" is reported.
    """
    g = problem.graph
    local_y, lifted_y = edge_labeling.local_y, edge_labeling.lifted_y
    if len(local_y) != g.n_edges or len(lifted_y) != problem.n_lifted:
        raise ValueError(
            f"edge labeling sizes ({len(local_y)}, {len(lifted_y)}) do not match "
            f"problem ({g.n_edges}, {problem.n_lifted})"
        )
    comp = connected_components(g, lambda i: not local_y[i])
    violations = []
    for kind, pairs, ys in (("local", g.edges, local_y), ("lifted", problem.lifted_edges, lifted_y)):
        for i, ((u, v), y) in enumerate(zip(pairs, ys)):
            separated = comp[u] != comp[v]
            if y and not separated:
                violations.append(Violation(kind, i, CUT_BUT_CONNECTED))
            elif not y and separated:
                violations.append(Violation(kind, i, JOINED_BUT_DISCONNECTED))
    return FeasibilityReport(tuple(violations))


def fold_parallel_lifted(problem: LiftedProblem) -> LiftedProblem:
    """Normalize lifted edges so the problem satisfies the strict invariants.

    Lifted self-pairs are dropped, lifted pairs coinciding with a local edge
    add their weight to it, and repeated lifted pairs are summed. Energies
    of all partitions are unchanged.
    """
    g = problem.graph
    local = list(problem.local_weights)
    lifted: dict[tuple[int, int], float] = {}
    for (u, v), w in zip(problem.lifted_edges, problem.lifted_weights):
        if u == v:
            continue
        eid = g.edge_id(u, v)
        if eid is not None:
            local[eid] += w
        else:
            lifted[(u, v)] = lifted.get((u, v), 0.0) + w
    return LiftedProblem(g, tuple(local), tuple(lifted), tuple(lifted.values()), problem.coordinates)
