"""Block-wise hierarchical solver for spatially embedded lifted problems.

Per level: tile the embedding into blocks, solve the problem induced by
each block (local and lifted edges with both endpoints inside), contract
the edges those solutions joined, then double the block shape. The
residual problem is solved flat and its labels projected back.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..graph import Graph, contract
from ..objective import LiftedProblem, energy, normalize_labels
from ._base import SolveResult, SolverConfig, SolverError, canonical_kind
from .kernighan_lin import solve_kernighan_lin
from .local_search import solve_local_search

POLISH_KINDS = (None, "ls", "kl")


@dataclass(frozen=True)
class HierarchicalConfig:
    """Settings for :func:`solve_hierarchical`.

    ``initial_block_shape=None`` picks a quarter of the bounding box extent
    per axis (rounded up). ``final_solver=None`` reuses ``inner_solver``.
    ``polish`` optionally refines the projected labeling on the original
    problem with node-move descent (``"ls"``) or two-cluster transfers
    (``"kl"``). Results do not depend on ``n_jobs``.
    """

    n_levels: int = 2
    initial_block_shape: tuple[int, int, int] | None = None
    inner_solver: str = "gaec-ls"
    final_solver: str | None = None
    n_jobs: int = 1
    exclude_boundary: bool = False
    local_search_max_sweeps: int = 100
    exact_max_nodes: int = 12
    polish: str | None = None

    def __post_init__(self):
        if self.n_levels < 1:
            raise SolverError("n_levels must be >= 1")
        if self.initial_block_shape is not None:
            shape = tuple(int(s) for s in self.initial_block_shape)
            if len(shape) != 3 or min(shape) < 1:
                raise SolverError(f"block shape needs three lengths >= 1, got {shape}")
            object.__setattr__(self, "initial_block_shape", shape)
        for kind in (self.inner_solver, self.final_solver):
            if kind is not None and canonical_kind(kind) == "hierarchical":
                raise SolverError("inner/final solver must be a flat solver")
        if self.n_jobs < 1:
            raise SolverError("n_jobs must be >= 1")
        if self.polish not in POLISH_KINDS:
            raise SolverError(f"polish must be one of {POLISH_KINDS}, got {self.polish!r}")

    def flat_config(self, kind: str | None) -> SolverConfig:
        return SolverConfig(
            kind=kind or self.inner_solver,
            exact_max_nodes=self.exact_max_nodes,
            local_search_max_sweeps=self.local_search_max_sweeps,
        )


def get_blocks(coordinates, block_shape: Sequence[int]) -> tuple[int, ...]:
    """Block id per node from a regular tiling anchored at the bounding-box origin.

    Ids are linearized in (z, y, x) order over the full tile grid, so
    empty tiles leave gaps in the numbering.
    """
    if coordinates is None:
        raise SolverError("problem has no coordinates")
    coords = [tuple(c) for c in coordinates]
    if not coords:
        raise SolverError("no coordinates")
    origin = [min(c[a] for c in coords) for a in range(3)]
    top = [max(c[a] for c in coords) for a in range(3)]
    counts = [(top[a] - origin[a]) // block_shape[a] + 1 for a in range(3)]
    out = []
    for c in coords:
        bz, by, bx = ((c[a] - origin[a]) // block_shape[a] for a in range(3))
        out.append((bz * counts[1] + by) * counts[2] + bx)
    return tuple(out)


def get_subproblem(
    problem: LiftedProblem, block_nodes: Iterable[int]
) -> tuple[LiftedProblem, tuple[int, ...]]:
    """Problem induced by ``block_nodes`` and the sub-id -> global-id map."""
    nodes = tuple(sorted(set(int(v) for v in block_nodes)))
    if not nodes:
        raise SolverError("empty block")
    local_id = {v: i for i, v in enumerate(nodes)}
    edges, weights = [], []
    for (u, v), w in zip(problem.graph.edges, problem.local_weights):
        if u in local_id and v in local_id:
            edges.append((local_id[u], local_id[v]))
            weights.append(w)
    lifted, lifted_w = [], []
    for (u, v), w in zip(problem.lifted_edges, problem.lifted_weights):
        if u in local_id and v in local_id:
            lifted.append((local_id[u], local_id[v]))
            lifted_w.append(w)
    coords = None
    if problem.coordinates is not None:
        coords = tuple(problem.coordinates[v] for v in nodes)
    sub = LiftedProblem(Graph(len(nodes), edges), tuple(weights), tuple(lifted), tuple(lifted_w), coords)
    return sub, nodes


def reduce_problem(
    problem: LiftedProblem,
    sub_partitions: Sequence[tuple[Sequence[int], Sequence[int]]],
    exclude_boundary: bool = False,
) -> tuple[LiftedProblem, tuple[int, ...]]:
    """Contract every local edge that a block solution left uncut.

    ``sub_partitions`` holds ``(global node ids, sub labeling)`` per block.
    Parallel local edges sum, lifted edges are remapped with self-pairs
    dropped and pairs landing on a local edge folded into it. A reduced
    node takes the coordinates of its smallest original node. With
    ``exclude_boundary`` only edges between nodes without neighbors outside
    their block are contracted.

    Returns the reduced problem and the old -> new node map.
    """
    g = problem.graph
    block_of: dict[int, int] = {}
    label_of: dict[int, int] = {}
    for b, (nodes, labels) in enumerate(sub_partitions):
        if len(nodes) != len(labels):
            raise SolverError("sub-partition labeling does not match its nodes")
        for v, lab in zip(nodes, labels):
            if v in block_of:
                raise SolverError(f"node {v} appears in more than one block")
            block_of[v] = b
            label_of[v] = lab

    def interior(v):
        return all(block_of.get(u) == block_of[v] for u in g.neighbors(v))

    merges = []
    for u, v in g.edges:
        if u in block_of and block_of.get(v) == block_of[u] and label_of[u] == label_of[v]:
            if not exclude_boundary or (interior(u) and interior(v)):
                merges.append((u, v))
    res = contract(g, merges)
    node_map = res.node_map
    new_g = res.reduced_graph

    local = [0.0] * new_g.n_edges
    for old, new in enumerate(res.edge_map):
        if new is not None:
            local[new] += problem.local_weights[old]
    lifted: dict[tuple[int, int], float] = {}
    for (u, v), w in zip(problem.lifted_edges, problem.lifted_weights):
        a, b = sorted((node_map[u], node_map[v]))
        if a == b:
            continue
        eid = new_g.edge_id(a, b)
        if eid is not None:
            local[eid] += w
        else:
            lifted[(a, b)] = lifted.get((a, b), 0.0) + w

    coords = None
    if problem.coordinates is not None:
        rep: dict[int, int] = {}
        for v, c in enumerate(node_map):
            rep.setdefault(c, v)
        coords = tuple(problem.coordinates[rep[c]] for c in range(new_g.node_count))
    reduced = LiftedProblem(new_g, tuple(local), tuple(lifted), tuple(lifted.values()), coords)
    return reduced, node_map


def _default_block_shape(coords) -> tuple[int, int, int]:
    extent = [max(c[a] for c in coords) - min(c[a] for c in coords) + 1 for a in range(3)]
    return tuple(max(1, math.ceil(e / 4)) for e in extent)


def _solve_block(args):
    from . import solve

    sub, config = args
    return solve(sub, config).labeling


def solve_hierarchical(problem: LiftedProblem, config: HierarchicalConfig | None = None) -> SolveResult:
    from . import solve

    config = config or HierarchicalConfig()
    if problem.coordinates is None:
        raise SolverError("hierarchical solver needs node coordinates")
    inner = config.flat_config(config.inner_solver)
    final = config.flat_config(config.final_solver)
    shape = config.initial_block_shape or _default_block_shape(problem.coordinates)

    current = problem
    to_current = tuple(range(problem.node_count))
    levels = []
    pool = ProcessPoolExecutor(config.n_jobs) if config.n_jobs > 1 else None
    try:
        for level in range(config.n_levels):
            blocks = get_blocks(current.coordinates, shape)
            members: dict[int, list[int]] = {}
            for v, b in enumerate(blocks):
                members.setdefault(b, []).append(v)
            jobs = []
            for b in sorted(members):
                sub, nodes = get_subproblem(current, members[b])
                jobs.append((nodes, (sub, inner)))
            tasks = [j for _, j in jobs]
            labelings = list(pool.map(_solve_block, tasks)) if pool else [_solve_block(t) for t in tasks]
            current, node_map = reduce_problem(
                current,
                [(nodes, lab) for (nodes, _), lab in zip(jobs, labelings)],
                exclude_boundary=config.exclude_boundary,
            )
            to_current = tuple(node_map[c] for c in to_current)
            levels.append({
                "level": level + 1,
                "block_shape": tuple(shape),
                "n_blocks": len(members),
                "nodes": current.node_count,
                "edges": current.graph.n_edges,
                "lifted": current.n_lifted,
            })
            shape = tuple(2 * s for s in shape)
    finally:
        if pool is not None:
            pool.shutdown()

    top = solve(current, final)
    labeling = normalize_labels(top.labeling[c] for c in to_current)
    if config.polish is not None:
        labeling = solve_local_search(problem, labeling, config.local_search_max_sweeps).labeling
        if config.polish == "kl":
            labeling = solve_kernighan_lin(problem, labeling).labeling
    return SolveResult(
        labeling,
        energy(problem, labeling),
        {"solver": "hierarchical", "levels": levels},
    )
