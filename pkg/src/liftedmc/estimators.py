"""scikit-learn style wrappers around the solvers.

The "samples" of these estimators are graph nodes: ``fit`` takes a whole
lifted problem (see :func:`~liftedmc.validation.check_problem`) and sets
``labels_`` to one cluster id per node, like ``sklearn.cluster`` models.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from .objective import energy
from .solvers import HierarchicalConfig, SolverConfig, solve, solve_hierarchical
from .validation import check_block_shape, check_labeling, check_problem


class _EnergyScoreMixin:
    def score(self, X, y=None):
        """Negative energy of ``labels_`` on ``X`` (higher is better)."""
        check_is_fitted(self, "labels_")
        problem = check_problem(X)
        return -energy(problem, check_labeling(self.labels_, problem.node_count).tolist())

    def _store(self, result):
        self.result_ = result
        self.labels_ = np.asarray(result.labeling, dtype=np.int64)
        self.energy_ = result.energy
        self.n_clusters_ = result.n_components
        return self


class LiftedMulticut(_EnergyScoreMixin, ClusterMixin, BaseEstimator):
    """Flat lifted multicut partitioning.

    Parameters
    ----------
    solver : {"gaec-ls", "gaec-kl", "gaec", "exact"}
        ``gaec-ls`` runs greedy contraction followed by node-move descent;
        ``gaec-kl`` adds two-cluster transfer refinement on top.
    exact_max_nodes : int
        Refuse exact enumeration above this many nodes (at most 14).
    max_sweeps : int
        Sweep limit of the descent stage.
    seed : int
        Kept for pipeline compatibility; the solvers are deterministic.

    Attributes
    ----------
    labels_ : ndarray of shape (n_nodes,)
    energy_ : float
    n_clusters_ : int
    result_ : SolveResult
    """

    def __init__(self, solver="gaec-ls", exact_max_nodes=12, max_sweeps=100, seed=0):
        self.solver = solver
        self.exact_max_nodes = exact_max_nodes
        self.max_sweeps = max_sweeps
        self.seed = seed

    def fit(self, X, y=None):
        problem = check_problem(X)
        config = SolverConfig(self.solver, self.exact_max_nodes, self.max_sweeps, self.seed)
        return self._store(solve(problem, config))


class HierarchicalLiftedMulticut(_EnergyScoreMixin, ClusterMixin, BaseEstimator):
    """Block-wise hierarchical solver for problems with node coordinates.

    ``block_shape=None`` uses a quarter of the bounding box per axis.
    ``polish`` (None, "ls" or "kl") refines the projected labeling on the
    full problem. Output does not depend on ``n_jobs``.
    """

    def __init__(self, n_levels=2, block_shape=None, inner_solver="gaec-ls",
                 final_solver=None, n_jobs=1, exclude_boundary=False, max_sweeps=100,
                 polish=None):
        self.n_levels = n_levels
        self.block_shape = block_shape
        self.inner_solver = inner_solver
        self.final_solver = final_solver
        self.n_jobs = n_jobs
        self.exclude_boundary = exclude_boundary
        self.max_sweeps = max_sweeps
        self.polish = polish

    def fit(self, X, y=None):
        problem = check_problem(X)
        config = HierarchicalConfig(
            n_levels=self.n_levels,
            initial_block_shape=check_block_shape(self.block_shape),
            inner_solver=self.inner_solver,
            final_solver=self.final_solver,
            n_jobs=self.n_jobs,
            exclude_boundary=self.exclude_boundary,
            local_search_max_sweeps=self.max_sweeps,
            polish=self.polish,
        )
        return self._store(solve_hierarchical(problem, config))
