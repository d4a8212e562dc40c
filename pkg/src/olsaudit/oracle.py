"""Brute-force references: subset enumeration and dense lambda grids.

Both are exponential or grid-resolution limited and exist to cross-check
the real algorithms on small instances.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .net import stability_at_lambda
from .ols import PINV_RCOND, Dataset, weighted_ols

MAX_BRUTE_N = 25
ZERO_TOL = 1e-10
_BATCH = 4096


@dataclass
class OracleResult:
    integral_stability: Optional[int] = None  # None means "exceeds max_k"
    witness_subset: List[int] = field(default_factory=list)
    fractional_upper: Optional[float] = None
    witness_lambda: Optional[np.ndarray] = None
    witness_w: Optional[np.ndarray] = None
    max_k: Optional[int] = None

    @property
    def exceeds_max_k(self) -> bool:
        return self.integral_stability is None and self.max_k is not None


def _batched_beta1(ds: Dataset, W: np.ndarray) -> np.ndarray:
    """Treatment coefficient of the weighted OLS fit for each row of ``W``."""
    outer = ds.X[:, :, None] * ds.X[:, None, :]
    grams = np.einsum("sn,nij->sij", W, outer)
    rhs = W @ (ds.X * ds.y[:, None])
    inv = np.linalg.pinv(grams, rcond=PINV_RCOND, hermitian=True)
    return np.einsum("sij,sj->si", inv, rhs)[:, 0]


def _overturned(b1, s, scale) -> np.ndarray:
    b1 = np.asarray(b1)
    return (np.abs(b1) <= ZERO_TOL * scale) | (np.sign(b1) * s <= 0)


def brute_force_integral(ds: Dataset, max_k: Optional[int] = None) -> OracleResult:
    """Smallest removal set that zeroes or flips the treatment coefficient."""
    n = ds.n
    if n > MAX_BRUTE_N:
        raise ValueError(f"brute force is limited to n <= {MAX_BRUTE_N}, got n={n}")
    max_k = n if max_k is None else min(max_k, n)
    b1_full = float(weighted_ols(ds)[0])
    scale = 1.0 + abs(b1_full)
    s = np.sign(b1_full)
    if abs(b1_full) <= ZERO_TOL * scale:
        return OracleResult(0, [], max_k=max_k)
    for k in range(1, max_k + 1):
        combos = itertools.combinations(range(n), k)
        while True:
            chunk = list(itertools.islice(combos, _BATCH))
            if not chunk:
                break
            idx = np.array(chunk)
            W = np.ones((idx.shape[0], n))
            W[np.arange(idx.shape[0])[:, None], idx] = 0.0
            hit = np.flatnonzero(_overturned(_batched_beta1(ds, W), s, scale))
            if hit.size:
                return OracleResult(k, [int(i) for i in idx[hit[0]]], max_k=max_k)
    return OracleResult(None, [], max_k=max_k)


def crossing_lambda(ds: Dataset, subset: Sequence[int], iters: int = 200) -> np.ndarray:
    """Control coefficients where the partial-removal path crosses zero.

    Along ``w(t) = 1 - t * 1_subset`` the treatment coefficient moves from
    its full-data value to an overturned one; at the crossing ``t*`` the
    fit ``(0, lam)`` is a weighted OLS solution retaining ``n - t* |subset|``
    weight, so ``lam`` is a grid point that certifies the integral witness.
    """
    w1 = np.ones(ds.n)
    w1[list(subset)] = 0.0
    b0 = float(weighted_ols(ds)[0])
    s = np.sign(b0)
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        b = float(weighted_ols(ds, 1.0 - mid * (1.0 - w1))[0])
        if s * b > 0:
            lo = mid
        else:
            hi = mid
    beta = weighted_ols(ds, 1.0 - hi * (1.0 - w1))
    return beta[1:]


def default_grid(ds: Dataset, points: int = 200, half_width: Optional[float] = None) -> List[np.ndarray]:
    """Axis-aligned grid around the OLS control coefficients."""
    p = ds.d - 1
    if p == 0:
        return [np.zeros(0)]
    center = weighted_ols(ds)[1:]
    if half_width is None:
        half_width = 3.0 * (1.0 + np.max(np.abs(center)))
    axes = [np.linspace(c - half_width, c + half_width, points) for c in center]
    mesh = np.meshgrid(*axes, indexing="ij")
    return list(np.stack([m.ravel() for m in mesh], axis=1))


def fractional_upper_via_grid(ds: Dataset, grid=None, method=None) -> OracleResult:
    """``min`` over the grid of ``n - V(lam)``; an upper bound for any grid."""
    grid = default_grid(ds) if grid is None else list(grid)
    if not grid:
        raise ValueError("grid must be nonempty")
    best = None
    for lam in grid:
        cand = stability_at_lambda(ds, lam, method)
        if best is None or cand.V > best.V:
            best = cand
    return OracleResult(
        fractional_upper=max(0.0, ds.n - best.V),
        witness_lambda=best.lam,
        witness_w=best.w,
    )
