"""Input coercion shared by the estimator classes."""
from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .objective import LiftedProblem


def check_problem(X) -> LiftedProblem:
    """Coerce ``X`` into a :class:`LiftedProblem`.

    Accepts a problem instance, a mapping with keys ``node_count``,
    ``edges``, ``weights`` and optionally ``lifted_edges``,
    ``lifted_weights``, ``coordinates``, or a tuple in that order.
    """
    if isinstance(X, LiftedProblem):
        return X
    if isinstance(X, Mapping):
        try:
            return LiftedProblem.from_edges(
                X["node_count"], X["edges"], X["weights"],
                X.get("lifted_edges", ()), X.get("lifted_weights", ()), X.get("coordinates"),
            )
        except KeyError as exc:
            raise ValueError(f"problem mapping is missing key {exc}") from None
    if isinstance(X, tuple) and 3 <= len(X) <= 6:
        return LiftedProblem.from_edges(*X)
    raise TypeError(f"cannot interpret {type(X).__name__} as a lifted multicut problem")


def check_labeling(labels, node_count: int | None = None) -> np.ndarray:
    """1-D integer array of labels, optionally checked against a node count."""
    arr = np.asarray(labels)
    if arr.ndim != 1:
        raise ValueError(f"labeling must be 1-D, got shape {arr.shape}")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError("labels must be integers")
        arr = arr.astype(np.int64)
    if node_count is not None and arr.size != node_count:
        raise ValueError(f"labeling has {arr.size} entries for {node_count} nodes")
    return arr.astype(np.int64, copy=False)


def check_block_shape(shape: Sequence[int] | None):
    if shape is None:
        return None
    shape = tuple(int(s) for s in shape)
    if len(shape) != 3 or min(shape) < 1:
        raise ValueError(f"block_shape needs three lengths >= 1, got {shape}")
    return shape
