"""Greedy influence-removal baseline.

Repeatedly drop the sample whose first-order influence most supports the
current sign of the treatment coefficient and refit, until the sign flips.
The surviving set is an explicit integral witness, so a flip is an upper
bound on the stability, usually a loose one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .bounds import UPPER, StabilityBound
from .ols import PINV_RCOND, Dataset

FLIP_TOL = 1e-10


@dataclass
class GreedyResult:
    removed_count: int
    removed_indices: List[int] = field(default_factory=list)
    final_beta1: float = 0.0
    flipped: bool = False

    def as_bound(self, n: int) -> StabilityBound:
        value = float(self.removed_count) if self.flipped else float(n)
        return StabilityBound(
            value,
            UPPER,
            "greedy",
            {"removed_indices": list(self.removed_indices), "final_beta1": self.final_beta1, "flipped": self.flipped},
        )


def _fit(X, y):
    gram = X.T @ X
    inv = np.linalg.pinv(gram, rcond=PINV_RCOND, hermitian=True)
    return inv, inv @ (X.T @ y)


def influence(ds: Dataset, w_mask, coord: int = 0) -> np.ndarray:
    """First-order influence of each surviving sample on coefficient ``coord``.

    ``(Sigma^+ X_i)[coord] * (y_i - X_i beta)`` with ``Sigma = X_S^T X_S``
    over the surviving rows; removed rows get 0.
    """
    mask = np.asarray(w_mask, dtype=bool).reshape(-1)
    if mask.shape[0] != ds.n:
        raise ValueError(f"mask has length {mask.shape[0]}, expected {ds.n}")
    out = np.zeros(ds.n)
    if not mask.any():
        return out
    Xs, ys = ds.X[mask], ds.y[mask]
    inv, beta = _fit(Xs, ys)
    out[mask] = (Xs @ inv[coord]) * (ys - Xs @ beta)
    return out


def greedy_upper_bound(ds: Dataset, max_steps: Optional[int] = None) -> GreedyResult:
    n, d = ds.n, ds.d
    max_steps = n - d if max_steps is None else max_steps
    limit = max(0, min(max_steps, n - d))
    mask = np.ones(n, dtype=bool)
    _, beta = _fit(ds.X, ds.y)
    b1 = float(beta[0])
    if abs(b1) <= FLIP_TOL:
        return GreedyResult(0, [], b1, True)
    s = np.sign(b1)
    removed: List[int] = []
    for _ in range(limit):
        score = s * influence(ds, mask, 0)
        score[~mask] = -np.inf
        i = int(np.argmax(score))  # first index wins ties
        mask[i] = False
        removed.append(i)
        _, beta = _fit(ds.X[mask], ds.y[mask])
        b1 = float(beta[0])
        if s * b1 <= FLIP_TOL:
            return GreedyResult(len(removed), removed, b1, True)
    return GreedyResult(len(removed), removed, b1, False)
