"""Agreement statistics between two aligned series of 1-5 Likert ratings."""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.stats import rankdata

LIKERT_MIN = 1
LIKERT_MAX = 5


def _as_ratings(series: Sequence[int], name: str) -> np.ndarray:
    arr = np.asarray(series)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty one-dimensional series")
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(arr == np.floor(arr)):
            raise ValueError(f"{name} must contain integer ratings")
        arr = arr.astype(int)
    if np.any(arr < LIKERT_MIN) or np.any(arr > LIKERT_MAX):
        raise ValueError(f"{name} must contain ratings in [{LIKERT_MIN}, {LIKERT_MAX}]")
    return arr


def _aligned(a: Sequence[int], b: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    ra = _as_ratings(a, "first series")
    rb = _as_ratings(b, "second series")
    if ra.size != rb.size:
        raise ValueError(f"series lengths differ: {ra.size} vs {rb.size}")
    return ra, rb


def pao(a: Sequence[int], b: Sequence[int]) -> float:
    """Proportion of observed agreement: 2A / (n_a + n_b), A = exact matches."""
    ra, rb = _aligned(a, b)
    matches = int(np.count_nonzero(ra == rb))
    return 2.0 * matches / (ra.size + rb.size)


def weighted_kappa(a: Sequence[int], b: Sequence[int]) -> float:
    """Cohen's kappa with quadratic weights over the five rating categories.

    Weights are w_ij = 1 - (i - j)^2 / (k - 1)^2 and chance agreement is the
    outer product of the two marginal distributions. Two constant series are
    defined as 1.0 when they agree everywhere and 0.0 otherwise.
    """
    ra, rb = _aligned(a, b)
    if np.all(ra == ra[0]) and np.all(rb == rb[0]):
        return 1.0 if ra[0] == rb[0] else 0.0
    k = LIKERT_MAX - LIKERT_MIN + 1
    confusion = np.zeros((k, k), dtype=float)
    np.add.at(confusion, (ra - LIKERT_MIN, rb - LIKERT_MIN), 1.0)
    confusion /= ra.size
    idx = np.arange(k)
    weights = 1.0 - np.subtract.outer(idx, idx) ** 2 / (k - 1) ** 2
    observed = float((weights * confusion).sum())
    expected = float((weights * np.outer(confusion.sum(axis=1), confusion.sum(axis=0))).sum())
    return (observed - expected) / (1.0 - expected)


def spearman_rho(a: Sequence[int], b: Sequence[int]) -> float:
    """Spearman rank correlation: Pearson correlation of average-tie ranks."""
    ra, rb = _aligned(a, b)
    if ra.size < 2:
        raise ValueError("rank correlation needs at least two items")
    if np.all(ra == ra[0]) or np.all(rb == rb[0]):
        raise ValueError("rank correlation is undefined for a constant series")
    ranks_a = rankdata(ra)
    ranks_b = rankdata(rb)
    return float(np.corrcoef(ranks_a, ranks_b)[0, 1])
