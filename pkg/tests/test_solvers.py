import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liftedmc.objective import LiftedProblem, check_feasible, energy, induced_edge_labels
from liftedmc.solvers import (
    HierarchicalConfig,
    SolverConfig,
    SolverError,
    get_blocks,
    get_subproblem,
    reduce_problem,
    solve,
    solve_exact,
    solve_gaec,
    solve_hierarchical,
    solve_kernighan_lin,
    solve_local_search,
)
from liftedmc.synthgen import PlantedConfig, gen_planted

from oracles import brute_minimum, set_partitions


def line_coords(n):
    return tuple((0, 0, x) for x in range(n))


@st.composite
def problems(draw, min_nodes=1, max_nodes=7, max_lifted=5):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = list(itertools.combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    rest = [p for p in pairs if p not in edges]
    lifted = draw(st.lists(st.sampled_from(rest), unique=True, max_size=max_lifted)) if rest else []
    w = st.floats(-1, 1, allow_nan=False)
    return LiftedProblem.from_edges(
        n, edges, draw(st.lists(w, min_size=len(edges), max_size=len(edges))),
        lifted, draw(st.lists(w, min_size=len(lifted), max_size=len(lifted))),
    )


def assert_consistent(problem, result):
    assert check_feasible(problem, induced_edge_labels(problem, result.labeling)).feasible
    assert result.energy == energy(problem, result.labeling)
    assert len(result.labeling) == problem.node_count


class TestConfig:
    def test_aliases(self):
        assert SolverConfig("gaec+local-search").kind == "gaec-ls"
        assert SolverConfig("hier").kind == "hierarchical"

    @pytest.mark.parametrize("kwargs", [{"kind": "ilp"}, {"exact_max_nodes": 15},
                                        {"exact_max_nodes": 0}, {"local_search_max_sweeps": -1}])
    def test_invalid(self, kwargs):
        with pytest.raises(SolverError):
            SolverConfig(**kwargs)

    @pytest.mark.parametrize("kwargs", [{"n_levels": 0}, {"initial_block_shape": (0, 1, 1)},
                                        {"inner_solver": "hier"}, {"n_jobs": 0}, {"polish": "x"}])
    def test_invalid_hierarchical(self, kwargs):
        with pytest.raises(SolverError):
            HierarchicalConfig(**kwargs)


class TestExact:
    def test_triangle(self, triangle):
        res = solve_exact(triangle)
        assert res.labeling == (0, 0, 0) and res.energy == 0.0

    def test_chain_tie_rule(self, chain):
        res = solve_exact(chain)
        assert res.labeling == (0, 0, 1) and res.energy == -10.0

    def test_single_node(self):
        res = solve_exact(LiftedProblem.from_edges(1, [], []))
        assert res.labeling == (0,) and res.energy == 0.0

    def test_node_limit(self):
        p = LiftedProblem.from_edges(13, [], [])
        with pytest.raises(SolverError):
            solve_exact(p)
        with pytest.raises(SolverError):
            solve_exact(p, max_nodes=15)

    def test_prefers_fewer_components(self):
        # every partition has energy 0 on an edgeless problem
        assert solve_exact(LiftedProblem.from_edges(4, [], [])).labeling == (0, 1, 2, 3)
        # zero weights: all partitions tie, the single component wins
        p = LiftedProblem.from_edges(3, [(0, 1), (1, 2)], [0.0, 0.0])
        assert solve_exact(p).labeling == (0, 0, 0)

    @given(problems())
    @settings(max_examples=150, deadline=None)
    def test_matches_brute_force(self, problem):
        res = solve_exact(problem)
        assert_consistent(problem, res)
        assert res.energy == pytest.approx(brute_minimum(problem), abs=1e-9)

    def test_larger_instance_enumerates_in_chunks(self):
        rng = np.random.default_rng(5)
        edges = [(i, i + 1) for i in range(10)] + [(0, 5), (3, 9)]
        p = LiftedProblem.from_edges(11, edges, rng.uniform(-1, 1, len(edges)),
                                     [(0, 10), (2, 7)], [-0.5, 0.7])
        res = solve_exact(p, max_nodes=11)
        assert_consistent(p, res)
        # no connected partition does better; spot-check local moves
        ls = solve_local_search(p, res.labeling)
        assert ls.energy == res.energy


class TestGaec:
    def test_triangle(self, triangle):
        res = solve_gaec(triangle)
        assert res.labeling == (0, 0, 0) and res.energy == 0.0
        assert res.diagnostics["contractions"] == 2

    def test_chain(self, chain):
        res = solve_gaec(chain)
        assert res.labeling == (0, 0, 1) and res.energy == -10.0

    def test_all_negative(self):
        p = LiftedProblem.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)], [-1.0, -2.0, -0.5, -3.0])
        res = solve_gaec(p)
        assert res.labeling == (0, 1, 2, 3)

    def test_tie_broken_by_edge_index(self):
        p = LiftedProblem.from_edges(3, [(0, 1), (1, 2)], [1.0, 1.0], [(0, 2)], [-1.5])
        # contracting (0, 1) first leaves (01, 2) with 1 - 1.5 < 0
        assert solve_gaec(p).labeling == (0, 0, 1)

    @given(problems(max_nodes=8))
    @settings(max_examples=100, deadline=None)
    def test_upper_bounds_exact(self, problem):
        res = solve_gaec(problem)
        assert_consistent(problem, res)
        assert res.energy >= solve_exact(problem).energy - 1e-9


class TestLocalSearch:
    def test_triangle_from_all_split(self, triangle):
        assert energy(triangle, [0, 1, 2]) == 3.0
        res = solve_local_search(triangle, [0, 1, 2])
        assert res.energy == 0.0 and res.labeling == (0, 0, 0)

    def test_optimum_unchanged(self, chain):
        res = solve_local_search(chain, [0, 0, 1])
        assert res.labeling == (0, 0, 1)
        assert res.diagnostics["sweep_energies"] == [-10.0, -10.0]

    def test_zero_sweeps(self, triangle):
        res = solve_local_search(triangle, [0, 1, 2], max_sweeps=0)
        assert res.labeling == (0, 1, 2)

    @given(problems(max_nodes=9), st.data())
    @settings(max_examples=150, deadline=None)
    def test_monotone_descent(self, problem, data):
        init = data.draw(st.lists(st.integers(0, 3), min_size=problem.node_count,
                                  max_size=problem.node_count))
        res = solve_local_search(problem, init)
        sweeps = res.diagnostics["sweep_energies"]
        assert sweeps[0] == pytest.approx(energy(problem, init))
        assert all(b <= a + 1e-12 for a, b in zip(sweeps, sweeps[1:]))
        assert_consistent(problem, res)
        assert res.energy >= solve_exact(problem).energy - 1e-9


class TestKernighanLin:
    @given(problems(max_nodes=9), st.data())
    @settings(max_examples=100, deadline=None)
    def test_never_worse(self, problem, data):
        init = data.draw(st.lists(st.integers(0, 3), min_size=problem.node_count,
                                  max_size=problem.node_count))
        res = solve_kernighan_lin(problem, init)
        rounds = res.diagnostics["round_energies"]
        assert all(b <= a + 1e-12 for a, b in zip(rounds, rounds[1:]))
        assert res.energy <= energy(problem, init) + 1e-12
        assert_consistent(problem, res)

    def test_escapes_single_move_optimum(self):
        p = LiftedProblem.from_edges(
            5, [(1, 2), (1, 4), (0, 3), (2, 3), (0, 4), (1, 3)], [1.0, 1.0, 0.0, 3.0, 2.0, -3.0],
            [(3, 4), (0, 1)], [2.0, -3.0])
        stuck = solve_local_search(p, (1, 1, 1, 0, 0))
        assert stuck.labeling == (0, 1, 2, 2, 0) and stuck.energy == -2.0
        res = solve_kernighan_lin(p, stuck.labeling)
        assert res.labeling == (0, 1, 0, 0, 0) and res.energy == -4.0
        assert res.energy == solve_exact(p).energy

    def test_gaec_kl_kind(self, chain):
        res = solve(chain, SolverConfig("gaec-kl"))
        assert res.energy == -10.0 and res.diagnostics["solver"] == "gaec-kl"


class TestBlocks:
    def test_two_blocks(self):
        assert get_blocks(line_coords(4), (1, 1, 2)) == (0, 0, 1, 1)

    def test_covering_block(self):
        assert set(get_blocks(line_coords(4), (1, 1, 8))) == {0}
        assert get_blocks(((5, 5, 5),), (1, 1, 1)) == (0,)

    def test_linearization_is_zyx(self):
        coords = [(z, y, x) for z in range(2) for y in range(2) for x in range(2)]
        assert get_blocks(coords, (1, 1, 1)) == tuple(range(8))
        # anchored at the bounding-box origin, not at zero
        shifted = [(z + 3, y + 3, x + 3) for z, y, x in coords]
        assert get_blocks(shifted, (1, 1, 1)) == tuple(range(8))

    def test_missing_coordinates(self):
        with pytest.raises(SolverError):
            get_blocks(None, (1, 1, 1))


class TestSubproblem:
    def test_crossing_lifted_excluded(self):
        p = LiftedProblem.from_edges(4, [(0, 1), (1, 2), (2, 3)], [1.0, 2.0, 3.0], [(0, 3)], [-1.0])
        sub, nodes = get_subproblem(p, {0, 1})
        assert nodes == (0, 1)
        assert sub.graph.edges == ((0, 1),) and sub.local_weights == (1.0,) and sub.n_lifted == 0

    def test_all_nodes(self, chain):
        sub, nodes = get_subproblem(chain, range(3))
        assert sub == chain and nodes == (0, 1, 2)

    def test_internal_lifted_kept(self):
        p = LiftedProblem.from_edges(4, [(0, 1), (1, 2), (2, 3)], [1.0, 2.0, 3.0], [(0, 2)], [-1.0])
        sub, _ = get_subproblem(p, [2, 0, 1])
        assert sub.graph.edges == ((0, 1), (1, 2))
        assert sub.lifted_edges == ((0, 2),) and sub.lifted_weights == (-1.0,)

    def test_empty_block(self, chain):
        with pytest.raises(SolverError):
            get_subproblem(chain, [])


class TestReduce:
    def test_singletons_identity(self, chain):
        reduced, node_map = reduce_problem(chain, [((0, 1, 2), (0, 1, 2))])
        assert reduced == chain and node_map == (0, 1, 2)

    def test_chain_fold(self, chain):
        reduced, node_map = reduce_problem(chain, [((0, 1), (0, 0)), ((2,), (0,))])
        assert node_map == (0, 0, 1)
        assert reduced.graph.edges == ((0, 1),)
        assert reduced.local_weights == (-10.0,) and reduced.n_lifted == 0

    def test_lifted_self_pair_dropped(self, chain):
        reduced, _ = reduce_problem(chain, [((0, 1, 2), (0, 0, 0))])
        assert reduced.node_count == 1 and reduced.n_lifted == 0
        assert energy(reduced, [0]) == energy(chain, [0, 0, 0])

    def test_coordinates_of_smallest_node(self):
        p = LiftedProblem.from_edges(3, [(0, 1), (1, 2)], [1.0, 1.0], coordinates=line_coords(3))
        reduced, _ = reduce_problem(p, [((1, 2), (0, 0)), ((0,), (0,))])
        assert reduced.coordinates == ((0, 0, 0), (0, 0, 1))

    def test_overlap_is_an_error(self, chain):
        with pytest.raises(SolverError):
            reduce_problem(chain, [((0, 1), (0, 0)), ((1, 2), (0, 0))])

    def test_exclude_boundary(self):
        p = LiftedProblem.from_edges(4, [(0, 1), (1, 2), (2, 3)], [1.0] * 3, coordinates=line_coords(4))
        parts = [((0, 1), (0, 0)), ((2, 3), (0, 0))]
        assert reduce_problem(p, parts)[1] == (0, 0, 1, 1)
        # nodes 1 and 2 touch the other block, so nothing is contracted
        assert reduce_problem(p, parts, exclude_boundary=True)[1] == (0, 1, 2, 3)

    @given(problems(min_nodes=2, max_nodes=8), st.data())
    @settings(max_examples=150, deadline=None)
    def test_energy_soundness(self, problem, data):
        n = problem.node_count
        cut = data.draw(st.integers(1, n))
        blocks = [tuple(range(cut)), tuple(range(cut, n))]
        parts = []
        for nodes in blocks:
            if nodes:
                labels = data.draw(st.lists(st.integers(0, 2), min_size=len(nodes), max_size=len(nodes)))
                parts.append((nodes, labels))
        reduced, node_map = reduce_problem(problem, parts)
        for labels in itertools.islice(set_partitions(reduced.node_count), 60):
            projected = [labels[c] for c in node_map]
            assert energy(reduced, labels) == pytest.approx(energy(problem, projected), abs=1e-9)


class TestHierarchical:
    def test_chain(self):
        p = LiftedProblem.from_edges(3, [(0, 1), (1, 2)], [10.0, 10.0], [(0, 2)], [-20.0],
                                     coordinates=line_coords(3))
        res = solve_hierarchical(p, HierarchicalConfig(n_levels=1, initial_block_shape=(1, 1, 2)))
        assert res.energy == -10.0
        assert res.diagnostics["levels"][0]["nodes"] == 2

    @pytest.mark.parametrize("inner", ["gaec", "exact"])
    def test_single_block_matches_flat(self, inner):
        inst = gen_planted(PlantedConfig(grid_shape=(1, 3, 4), n_true_objects=3, boundary_noise=0.2, seed=1))
        cfg = HierarchicalConfig(n_levels=1, initial_block_shape=(8, 8, 8), inner_solver=inner)
        res = solve_hierarchical(inst.problem, cfg)
        flat = solve(inst.problem, SolverConfig(inner))
        assert res.labeling == flat.labeling and res.energy == flat.energy

    def test_requires_coordinates(self, chain):
        with pytest.raises(SolverError):
            solve_hierarchical(chain)

    def test_diagnostics_shrink(self):
        inst = gen_planted(PlantedConfig(grid_shape=(4, 8, 8), boundary_noise=0.1, seed=3))
        res = solve_hierarchical(inst.problem, HierarchicalConfig(n_levels=2))
        levels = res.diagnostics["levels"]
        assert [lv["level"] for lv in levels] == [1, 2]
        assert levels[0]["block_shape"] == (1, 2, 2) and levels[1]["block_shape"] == (2, 4, 4)
        assert inst.problem.node_count > levels[0]["nodes"] >= levels[1]["nodes"]
        assert_consistent(inst.problem, res)

    @pytest.mark.parametrize("polish", [None, "ls", "kl"])
    def test_parallel_identical(self, polish):
        inst = gen_planted(PlantedConfig(grid_shape=(4, 8, 8), boundary_noise=0.1, seed=11))
        runs = [solve_hierarchical(inst.problem, HierarchicalConfig(n_jobs=j, polish=polish,
                                                                   exclude_boundary=True))
                for j in (1, 2)]
        assert runs[0] == runs[1]
        assert runs[0].diagnostics == runs[1].diagnostics

    def test_polish_never_hurts(self):
        inst = gen_planted(PlantedConfig(grid_shape=(2, 6, 6), boundary_noise=0.2, seed=4))
        base = solve_hierarchical(inst.problem, HierarchicalConfig())
        for polish in ("ls", "kl"):
            assert solve_hierarchical(inst.problem, HierarchicalConfig(polish=polish)).energy <= base.energy


@pytest.mark.parametrize("kind", ["exact", "gaec", "gaec-ls", "gaec-kl"])
def test_dispatch_consistency(kind, triangle):
    assert_consistent(triangle, solve(triangle, SolverConfig(kind)))


def test_dispatch_hierarchical():
    inst = gen_planted(PlantedConfig(grid_shape=(2, 4, 4), seed=2))
    res = solve(inst.problem, SolverConfig("hierarchical"))
    assert res.diagnostics["solver"] == "hierarchical"
    assert_consistent(inst.problem, res)
