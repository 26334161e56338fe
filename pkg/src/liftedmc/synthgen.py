"""Seeded planted-partition lifted multicut instances on 3D grids.

Draw order from a single ``numpy.random.default_rng(seed)`` stream:
object seed nodes, edge flip uniforms, boundary-distribution draws,
interior-distribution draws, attributed nodes, attribution-error uniforms,
replacement labels.
"""
from __future__ import annotations

from collections import deque
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import truncnorm

from .graph import Graph
from .objective import LiftedProblem, normalize_labels, prob_to_weight

BOUNDARY_MEAN = 0.8
INTERIOR_MEAN = 0.2
SIGMA = 0.1


@dataclass(frozen=True)
class PlantedConfig:
    """Generator settings; ``grid_shape`` is ``(z, y, x)``.

    ``noise_object`` restricts ``boundary_noise`` to edges inside one
    planted object (by ground-truth label); ``None`` applies it everywhere.
    """

    grid_shape: tuple[int, int, int] = (4, 8, 8)
    n_true_objects: int = 4
    boundary_noise: float = 0.0
    attribution_coverage: float = 0.0
    attribution_error: float = 0.0
    seed: int = 0
    noise_object: int | None = None

    def __post_init__(self):
        shape = tuple(int(s) for s in self.grid_shape)
        if len(shape) != 3 or min(shape) < 1:
            raise ValueError(f"grid_shape needs three dimensions >= 1, got {self.grid_shape}")
        object.__setattr__(self, "grid_shape", shape)
        if self.n_true_objects < 2:
            raise ValueError("n_true_objects must be >= 2")
        for name in ("boundary_noise", "attribution_coverage", "attribution_error"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PlantedInstance:
    problem: LiftedProblem
    ground_truth: tuple[int, ...]
    attribution: dict[int, int]
    cut_probabilities: tuple[float, ...]


def grid_graph(shape) -> tuple[Graph, tuple[tuple[int, int, int], ...]]:
    """6-neighborhood grid; node id is the C-order index of ``(z, y, x)``."""
    nz, ny, nx = shape
    coords = tuple((z, y, x) for z in range(nz) for y in range(ny) for x in range(nx))

    def idx(z, y, x):
        return (z * ny + y) * nx + x

    edges = []
    for z, y, x in coords:
        if x + 1 < nx:
            edges.append((idx(z, y, x), idx(z, y, x + 1)))
        if y + 1 < ny:
            edges.append((idx(z, y, x), idx(z, y + 1, x)))
        if z + 1 < nz:
            edges.append((idx(z, y, x), idx(z + 1, y, x)))
    return Graph(len(coords), edges), coords


def voronoi_labels(graph: Graph, seeds) -> tuple[int, ...]:
    """Multi-source BFS regions; label ``k`` grows from ``seeds[k]``.

    Regions are connected. A node equidistant to several seeds goes to the
    region that reaches it first in BFS queue order.
    """
    labels = [-1] * graph.node_count
    queue = deque()
    for k, s in enumerate(seeds):
        labels[s] = k
        queue.append(s)
    while queue:
        x = queue.popleft()
        for y in graph.neighbors(x):
            if labels[y] < 0:
                labels[y] = labels[x]
                queue.append(y)
    return tuple(labels)


def _truncated(rng, mean, lo, hi, size):
    a, b = (lo - mean) / SIGMA, (hi - mean) / SIGMA
    return truncnorm.rvs(a, b, loc=mean, scale=SIGMA, size=size, random_state=rng)


def _edge_probabilities(rng, graph: Graph, gt, boundary_noise: float, noise_object=None):
    edges = np.array(graph.edges, dtype=np.int64).reshape(-1, 2)
    gt_arr = np.array(gt)
    crossing = gt_arr[edges[:, 0]] != gt_arr[edges[:, 1]]
    m = len(edges)
    flip = rng.random(m) < boundary_noise
    if noise_object is not None:
        inside = (gt_arr[edges[:, 0]] == noise_object) & (gt_arr[edges[:, 1]] == noise_object)
        flip &= inside
    boundary_draw = _truncated(rng, BOUNDARY_MEAN, 0.5, 1.0, m)
    interior_draw = _truncated(rng, INTERIOR_MEAN, 0.0, 0.5, m)
    return np.where(crossing ^ flip, boundary_draw, interior_draw)


def gen_planted(config: PlantedConfig) -> PlantedInstance:
    """Grid instance with Voronoi ground truth and noisy boundary evidence.

    Edges between different objects draw their cut probability from a
    Gaussian around 0.8 truncated to (0.5, 1); edges inside an object from
    one around 0.2 truncated to (0, 0.5). With probability
    ``boundary_noise`` an edge draws from the other distribution instead.
    Attribution labels a random ``attribution_coverage`` fraction of nodes
    with their true object, each replaced by a different random object
    with probability ``attribution_error``.
    """
    graph, coords = grid_graph(config.grid_shape)
    n = graph.node_count
    if config.n_true_objects > n:
        raise ValueError(f"{config.n_true_objects} objects do not fit in {n} nodes")
    rng = np.random.default_rng(config.seed)

    seeds = [int(s) for s in rng.choice(n, size=config.n_true_objects, replace=False)]
    gt = normalize_labels(voronoi_labels(graph, seeds))
    probs = _edge_probabilities(rng, graph, gt, config.boundary_noise, config.noise_object)
    weights = prob_to_weight(probs)

    k = int(round(config.attribution_coverage * n))
    attributed = np.sort(rng.choice(n, size=k, replace=False)) if k else np.array([], dtype=np.int64)
    wrong = rng.random(k) < config.attribution_error
    replacement = rng.integers(0, config.n_true_objects - 1, size=k)
    attribution = {}
    for v, bad, r in zip(attributed, wrong, replacement):
        label = gt[int(v)]
        if bad:
            label = int(r) if r < label else int(r) + 1
        attribution[int(v)] = label

    problem = LiftedProblem(graph, tuple(float(w) for w in weights), coordinates=coords)
    return PlantedInstance(problem, gt, attribution, tuple(float(p) for p in probs))


@dataclass(frozen=True)
class BridgedInstance:
    """Two planted objects plus the boundary edges made falsely attractive."""

    instance: PlantedInstance
    bridge_edges: tuple[int, ...]


def gen_bridged(
    grid_shape=(1, 8, 8),
    n_bridges: int = 3,
    bridge_probability: float = 1e-3,
    boundary_noise: float = 0.0,
    seed: int = 0,
) -> BridgedInstance:
    """Two objects split by a plane ``x = c`` with ``n_bridges`` corrupted edges.

    ``c`` is drawn from the interior of the x range, so both objects are
    slabs of at least two columns. Edge evidence is drawn as in
    :func:`gen_planted`; afterwards ``n_bridges`` random boundary edges get
    cut probability ``bridge_probability``. Draw order: plane position,
    edge evidence, bridge edges.
    """
    graph, coords = grid_graph(grid_shape)
    nx = tuple(int(s) for s in grid_shape)[2]
    if nx < 4:
        raise ValueError("grid needs at least 4 columns along x")
    rng = np.random.default_rng(seed)
    cut = int(rng.integers(2, nx - 1))
    gt = tuple(0 if c[2] < cut else 1 for c in coords)
    probs = _edge_probabilities(rng, graph, gt, boundary_noise)
    boundary = [e for e, (u, v) in enumerate(graph.edges) if gt[u] != gt[v]]
    if not 0 <= n_bridges <= len(boundary):
        raise ValueError(f"cannot place {n_bridges} bridges on {len(boundary)} boundary edges")
    bridges = tuple(sorted(int(e) for e in rng.choice(boundary, size=n_bridges, replace=False)))
    probs[list(bridges)] = bridge_probability
    problem = LiftedProblem(graph, tuple(float(w) for w in prob_to_weight(probs)), coordinates=coords)
    inst = PlantedInstance(problem, gt, {}, tuple(float(p) for p in probs))
    return BridgedInstance(inst, bridges)


def oracle_paths(
    graph: Graph, ground_truth, labeling, paths_per_object: int = 10,
    merge_probability: float = 0.95, seed: int = 0,
):
    """Path evidence for every segment that covers several true objects.

    Each path joins two nodes of different true objects along a shortest
    route inside the segment, and is reported with ``merge_probability``.
    """
    from .lifting import PathEvidence

    rng = np.random.default_rng(seed)
    segments: dict[int, list[int]] = {}
    for v, c in enumerate(labeling):
        segments.setdefault(c, []).append(v)
    evidence = []
    for seg in sorted(segments):
        members = segments[seg]
        objects = sorted({ground_truth[v] for v in members})
        if len(objects) < 2:
            continue
        allowed = set(members)
        by_object = {o: [v for v in members if ground_truth[v] == o] for o in objects}
        for _ in range(paths_per_object):
            oa, ob = rng.choice(len(objects), size=2, replace=False)
            s = int(rng.choice(by_object[objects[oa]]))
            t = int(rng.choice(by_object[objects[ob]]))
            path = _shortest_path(graph, allowed, s, t)
            if path is not None:
                evidence.append(PathEvidence(path, merge_probability))
    return evidence


def _shortest_path(graph: Graph, allowed, s: int, t: int):
    prev = {s: None}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        if x == t:
            break
        for y in graph.neighbors(x):
            if y in allowed and y not in prev:
                prev[y] = x
                queue.append(y)
    if t not in prev:
        return None
    path = [t]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]
