"""Partition comparison: variation of information and adapted Rand error.

``gt`` is the reference partition and ``seg`` the one being scored. Label
values are arbitrary integers; only which elements share a label matters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class ContingencyTable:
    counts: dict[tuple[int, int], int]
    gt_counts: dict[int, int]
    seg_counts: dict[int, int]
    n: int


@dataclass(frozen=True)
class MetricReport:
    vi_split: float
    vi_merge: float
    rand_error: float

    @property
    def vi(self) -> float:
        return self.vi_split + self.vi_merge


def _check(gt, seg):
    gt = np.asarray(gt, dtype=np.int64).ravel()
    seg = np.asarray(seg, dtype=np.int64).ravel()
    if gt.shape != seg.shape:
        raise ValueError(f"labelings differ in length: {gt.size} vs {seg.size}")
    if gt.size == 0:
        raise ValueError("empty labeling")
    return gt, seg


def contingency(gt: Sequence[int], seg: Sequence[int]) -> ContingencyTable:
    gt, seg = _check(gt, seg)
    pairs, counts = np.unique(np.stack([gt, seg], axis=1), axis=0, return_counts=True)
    table = {(int(i), int(j)): int(c) for (i, j), c in zip(pairs, counts)}
    gl, gc = np.unique(gt, return_counts=True)
    sl, sc = np.unique(seg, return_counts=True)
    return ContingencyTable(
        table,
        {int(k): int(c) for k, c in zip(gl, gc)},
        {int(k): int(c) for k, c in zip(sl, sc)},
        int(gt.size),
    )


def vi(gt: Sequence[int], seg: Sequence[int], base: float = math.e) -> tuple[float, float]:
    """Split and merge parts of the variation of information.

    ``vi_split = H(seg | gt)`` grows with over-segmentation and
    ``vi_merge = H(gt | seg)`` with under-segmentation; their sum is the
    total VI.
    """
    t = contingency(gt, seg)
    n = t.n
    split = merge = 0.0
    for (i, j), c in t.counts.items():
        p = c / n
        split -= p * math.log(c / t.gt_counts[i])
        merge -= p * math.log(c / t.seg_counts[j])
    scale = math.log(base)
    return abs(split) / scale, abs(merge) / scale


def adapted_rand_error(gt: Sequence[int], seg: Sequence[int]) -> float:
    """``1 - F`` with the adapted Rand F-score of the normalized contingency table."""
    t = contingency(gt, seg)
    n2 = float(t.n) ** 2
    sum_p = sum(c * c for c in t.counts.values()) / n2
    sum_t = sum(c * c for c in t.gt_counts.values()) / n2
    sum_s = sum(c * c for c in t.seg_counts.values()) / n2
    return 1.0 - 2.0 * sum_p / (sum_t + sum_s)


def evaluate(gt: Sequence[int], seg: Sequence[int], base: float = math.e) -> MetricReport:
    split, merge = vi(gt, seg, base)
    return MetricReport(split, merge, adapted_rand_error(gt, seg))
