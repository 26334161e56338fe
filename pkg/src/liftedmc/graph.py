"""Undirected graph with contraction and traversal primitives.

Node ids are dense integers ``0..n-1``. Edges are stored as sorted
``(u, v)`` pairs with ``u < v``; the position of an edge in
:attr:`Graph.edges` is its edge index everywhere else in the package.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

Pair = tuple[int, int]


class GraphError(ValueError):
    """Raised for malformed graph input (self-loops, duplicates, bad ids)."""


class DisjointSet:
    """Array-backed union-find with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def labels(self) -> tuple[int, ...]:
        """Component label per element, numbered by first occurrence."""
        seen: dict[int, int] = {}
        out = []
        for x in range(len(self.parent)):
            r = self.find(x)
            if r not in seen:
                seen[r] = len(seen)
            out.append(seen[r])
        return tuple(out)


class Graph:
    """Immutable simple undirected graph.

    Parameters
    ----------
    node_count : int
        Number of nodes, at least 1.
    edges : iterable of (int, int)
        Node pairs in any orientation and order. Self-loops, duplicates
        (in either orientation) and out-of-range endpoints raise
        :class:`GraphError`.
    """

    __slots__ = ("node_count", "edges", "_incident", "_edge_index")

    def __init__(self, node_count: int, edges: Iterable[Sequence[int]] = ()):
        node_count = int(node_count)
        if node_count < 1:
            raise GraphError(f"node_count must be >= 1, got {node_count}")
        canon = []
        for pair in edges:
            u, v = int(pair[0]), int(pair[1])
            if u == v:
                raise GraphError(f"self-loop ({u}, {v})")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise GraphError(f"endpoint out of range ({u}, {v}) for {node_count} nodes")
            canon.append((u, v) if u < v else (v, u))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise GraphError(f"duplicate edge {a}")
        incident: list[list[tuple[int, int]]] = [[] for _ in range(node_count)]
        for i, (u, v) in enumerate(canon):
            incident[u].append((v, i))
            incident[v].append((u, i))
        object.__setattr__(self, "node_count", node_count)
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "_incident", tuple(tuple(sorted(x)) for x in incident))
        object.__setattr__(self, "_edge_index", {e: i for i, e in enumerate(canon)})

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.node_count == other.node_count and self.edges == other.edges

    def __hash__(self):
        return hash((self.node_count, self.edges))

    def __repr__(self):
        return f"Graph(node_count={self.node_count}, n_edges={len(self.edges)})"

    def __getstate__(self):
        return (self.node_count, self.edges)

    def __setstate__(self, state):
        Graph.__init__(self, *state)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return tuple(v for v, _ in self._incident[u])

    def incident(self, u: int) -> tuple[tuple[int, int], ...]:
        """``(neighbor, edge index)`` pairs of node ``u``, sorted by neighbor."""
        return self._incident[u]

    def edge_id(self, u: int, v: int) -> int | None:
        if u > v:
            u, v = v, u
        return self._edge_index.get((u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_id(u, v) is not None


def build_graph(node_count: int, edges: Iterable[Sequence[int]]) -> Graph:
    return Graph(node_count, edges)


def connected_components(
    graph: Graph, keep_edge: Callable[[int], bool] | None = None
) -> tuple[int, ...]:
    """Label nodes by connected component over the kept edges.

    Labels are consecutive integers assigned in order of the smallest
    node id in each component. ``keep_edge=None`` keeps every edge.
    """
    ds = DisjointSet(graph.node_count)
    for i, (u, v) in enumerate(graph.edges):
        if keep_edge is None or keep_edge(i):
            ds.union(u, v)
    return ds.labels()


def graph_distance_pairs(graph: Graph, max_distance: int) -> list[tuple[int, int, int]]:
    """All ``(u, v, d)`` with ``u < v`` and shortest-path distance ``2 <= d <= max_distance``.

    Sorted by distance, then by pair.
    """
    if max_distance < 2:
        raise ValueError(f"max_distance must be >= 2, got {max_distance}")
    out = []
    for src in range(graph.node_count):
        dist = {src: 0}
        queue = deque([src])
        while queue:
            x = queue.popleft()
            d = dist[x]
            if d == max_distance:
                continue
            for y, _ in graph.incident(x):
                if y not in dist:
                    dist[y] = d + 1
                    queue.append(y)
        out.extend((src, v, d) for v, d in dist.items() if v > src and d >= 2)
    out.sort(key=lambda t: (t[2], t[0], t[1]))
    return out


@dataclass(frozen=True)
class ContractionResult:
    """Outcome of :func:`contract`.

    ``edge_map[i]`` is the new edge index of old edge ``i``, or ``None``
    when both endpoints landed in the same new node.
    """

    reduced_graph: Graph
    node_map: tuple[int, ...]
    edge_map: tuple[int | None, ...]


def contract(graph: Graph, merge_pairs: Iterable[Sequence[int]]) -> ContractionResult:
    """Merge nodes along ``merge_pairs``; parallel edges collapse to one."""
    ds = DisjointSet(graph.node_count)
    for pair in merge_pairs:
        u, v = int(pair[0]), int(pair[1])
        if not (0 <= u < graph.node_count and 0 <= v < graph.node_count):
            raise GraphError(f"merge pair out of range ({u}, {v})")
        ds.union(u, v)
    node_map = ds.labels()
    n_new = max(node_map) + 1
    mapped: list[Pair | None] = []
    for u, v in graph.edges:
        a, b = node_map[u], node_map[v]
        mapped.append(None if a == b else ((a, b) if a < b else (b, a)))
    reduced = Graph(n_new, sorted({p for p in mapped if p is not None}))
    edge_map = tuple(None if p is None else reduced.edge_id(*p) for p in mapped)
    return ContractionResult(reduced, node_map, edge_map)
