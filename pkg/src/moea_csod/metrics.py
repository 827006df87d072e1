"""IGD and the rank-sum significance marks used in result tables."""

from __future__ import annotations

import numpy as np
from scipy import stats

from .core import ContractError


def igd(approx: np.ndarray, reference: np.ndarray, chunk: int = 4096) -> float:
    """Mean distance from each reference point to its nearest approximation point."""
    A = np.atleast_2d(np.asarray(approx, dtype=np.float64))
    R = np.atleast_2d(np.asarray(reference, dtype=np.float64))
    if A.size == 0 or R.size == 0:
        raise ContractError("IGD needs non-empty approximation and reference sets")
    if A.shape[1] != R.shape[1]:
        raise ContractError(f"dimension mismatch: {A.shape[1]} vs {R.shape[1]}")
    total = 0.0
    for start in range(0, len(R), chunk):
        diff = R[start:start + chunk, None, :] - A[None, :, :]
        total += float(np.sqrt(np.min(np.sum(diff**2, axis=2), axis=1)).sum())
    return total / len(R)


def rank_sum_statistic(a, b) -> float:
    """Sum of the (mid)ranks of ``a`` in the pooled sample."""
    a = np.asarray(a, dtype=np.float64)
    ranks = stats.rankdata(np.concatenate([a, np.asarray(b, dtype=np.float64)]))
    return float(ranks[: len(a)].sum())


def rank_sum_pvalue(a, b) -> float:
    """Two-sided Wilcoxon rank-sum p-value (exact for small samples without ties)."""
    return float(stats.mannwhitneyu(a, b, alternative="two-sided").pvalue)


def significance(reference_runs, comparator_runs, alpha_level: float = 0.05) -> str:
    """'+' if the comparator is significantly better (lower), '-' if worse, else '≈'."""
    a = np.asarray(reference_runs, dtype=np.float64)
    b = np.asarray(comparator_runs, dtype=np.float64)
    if len(a) < 3 or len(b) < 3:
        raise ContractError("significance needs at least 3 samples per side")
    if rank_sum_pvalue(a, b) >= alpha_level:
        return "≈"
    return "+" if np.median(b) < np.median(a) else "-"
