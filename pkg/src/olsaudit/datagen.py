"""Synthetic regression datasets and an empirical anti-concentration falsifier."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from .net import NetConfig, residual_net
from .ols import Dataset, ols_error_norm, weighted_ols

FAMILIES = ("heterogeneous", "isotropic", "covariance_shift")


def gen_heterogeneous(n: int = 1000, k: int = 10, sigma: float = 1.0, seed=0) -> Dataset:
    """Two subpopulations; only the first ``k`` rows carry the treatment effect.

    Rows ``< k``: ``x1 ~ N(-1, 0.1^2)``, ``x2 ~ N(0, 1)``, ``y = x1``.
    Remaining rows: ``x1 = 0``, ``x2 ~ N(0, 1)``, ``y ~ N(0, sigma^2)``.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    rng = np.random.default_rng(seed)
    X = np.zeros((n, 2))
    X[:k, 0] = rng.normal(-1.0, 0.1, size=k)
    X[:, 1] = rng.standard_normal(n)
    y = np.empty(n)
    y[:k] = X[:k, 0]
    y[k:] = sigma * rng.standard_normal(n - k)
    return Dataset(X, y, ["x1", "x2"])


def gen_isotropic(n: int = 1000, d: int = 2, sigma: float = 1.0, seed=0) -> Dataset:
    """``X ~ N(0, I_d)``, ``y = X @ 1 + N(0, sigma^2)``."""
    if n < 1 or d < 1:
        raise ValueError("need n, d >= 1")
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d))
    y = X.sum(axis=1) + sigma * rng.standard_normal(n)
    return Dataset(X, y, [f"x{j + 1}" for j in range(d)])


COV_SHIFT = np.array([[1.0, -1.0], [-1.0, 2.0]])


def gen_covariance_shift(
    n: int = 1000, k: int = 30, c: float = 0.2, C: float = 300.0, seed=0, outliers: bool = True
) -> Dataset:
    """Correlated bulk plus two kinds of outliers (``n + k + 1`` rows).

    The bulk is ``N(0, [[1, -1], [-1, 2]])`` with ``y = -x1 + x2``.  ``k``
    identical rows sit at ``c * (1, -3)`` with response ``-C``, and one
    high-leverage row at ``sqrt(n) * (1, 1)`` is placed exactly on the OLS
    fit of all other rows, so it has zero residual at the full-data fit.
    ``outliers=False`` returns the bulk alone.
    """
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    rng = np.random.default_rng(seed)
    bulk = rng.multivariate_normal(np.zeros(2), COV_SHIFT, size=n)
    yb = -bulk[:, 0] + bulk[:, 1]
    if not outliers:
        return Dataset(bulk, yb, ["x1", "x2"])
    X1 = np.tile(c * np.array([1.0, -3.0]), (k, 1))
    y1 = np.full(k, -C)
    X = np.vstack([bulk, X1])
    y = np.concatenate([yb, y1])
    beta = weighted_ols(Dataset(X, y))
    x2 = math.sqrt(n) * np.ones(2)
    X = np.vstack([X, x2])
    y = np.append(y, x2 @ beta)
    return Dataset(X, y, ["x1", "x2"])


def smooth_responses(ds: Dataset, sigma: float, seed=0) -> Dataset:
    """Add independent ``N(0, sigma^2)`` noise to the responses."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    rng = np.random.default_rng(seed)
    return Dataset(ds.X, ds.y + sigma * rng.standard_normal(ds.n), ds.column_names)


def generate(family: str, seed=0, **params) -> Dataset:
    if family == "heterogeneous":
        return gen_heterogeneous(seed=seed, **params)
    if family == "isotropic":
        return gen_isotropic(seed=seed, **params)
    if family == "covariance_shift":
        return gen_covariance_shift(seed=seed, **params)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


# --------------------------------------------------------------------------
# anti-concentration falsifier
# --------------------------------------------------------------------------


@dataclass
class AcReport:
    assumption: str
    eps: float
    delta: float
    worst_fraction_found: float
    witness_beta: Optional[np.ndarray]
    verdict: str
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def falsified(self) -> bool:
        return self.verdict == "falsified"


def small_count(ds: Dataset, variant: str, beta, delta: float, M: Optional[float] = None) -> int:
    """Number of samples whose residual (A) or augmented projection (B) is small."""
    beta = np.asarray(beta, dtype=float).reshape(-1)
    n = ds.n
    if variant == "A":
        M = ols_error_norm(ds) if M is None else M
        vals = np.abs(ds.X @ beta - ds.y)
        thresh = delta * M / math.sqrt(n)
    elif variant == "B":
        Xbar = np.column_stack([ds.X, ds.y])
        proj = Xbar @ beta
        vals = np.abs(proj)
        thresh = delta / math.sqrt(n) * np.linalg.norm(proj)
    else:
        raise ValueError("variant must be 'A' or 'B'")
    return int(np.sum(vals < thresh))


def _counts(ds: Dataset, variant: str, B: np.ndarray, delta: float, M) -> np.ndarray:
    """``small_count`` for every row of ``B`` at once."""
    n = ds.n
    if variant == "A":
        vals = np.abs(ds.X @ B.T - ds.y[:, None])
        thresh = delta * M / math.sqrt(n)
    else:
        proj = np.column_stack([ds.X, ds.y]) @ B.T
        vals = np.abs(proj)
        thresh = delta / math.sqrt(n) * np.linalg.norm(proj, axis=0)
    return np.sum(vals < thresh, axis=0)


def _candidates(ds: Dataset, variant: str, trials: int, rng) -> np.ndarray:
    dim = ds.d if variant == "A" else ds.d + 1
    base = weighted_ols(ds)
    Xbar = np.column_stack([ds.X, ds.y])
    cands = [rng.standard_normal((trials, dim))]
    if variant == "A":
        cands.append(base[None, :])
        cands.append(base + 0.5 * rng.standard_normal((trials, dim)) * (1 + np.abs(base)))
    else:
        cands.append(np.append(base, -1.0)[None, :])
    # coefficient vectors that zero out a random handful of rows
    sub = dim if variant == "A" else dim - 1
    if 0 < sub <= ds.n:
        for _ in range(trials):
            rows = rng.choice(ds.n, size=sub, replace=False)
            if variant == "A":
                cands.append(np.linalg.lstsq(ds.X[rows], ds.y[rows], rcond=None)[0][None, :])
            else:
                cands.append(np.linalg.svd(Xbar[rows])[2][-1][None, :])
    # zero-treatment fits from the residual net
    try:
        lams = residual_net(ds, NetConfig(min(trials, 200), int(rng.integers(2**31)))).lambdas
    except ValueError:
        lams = np.zeros((0, ds.d - 1))
    if lams.shape[0]:
        beta = np.column_stack([np.zeros(lams.shape[0]), lams])
        cands.append(beta if variant == "A" else np.column_stack([beta, -np.ones(lams.shape[0])]))
    return np.vstack(cands)


def check_anti_concentration(ds: Dataset, variant: str = "A", eps: float = 0.1, delta: float = 0.1, trials: int = 1000, seed=0) -> AcReport:
    """Search for a coefficient vector with more than ``eps n`` small values.

    A ``"falsified"`` verdict is a proof (the witness is recounted); a
    ``"not-falsified"`` verdict only means the search found nothing.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if variant not in ("A", "B"):
        raise ValueError("variant must be 'A' or 'B'")
    n = ds.n
    if delta <= 0:
        return AcReport(variant, eps, delta, 0.0, None, "not-falsified", {"reason": "delta = 0 admits no small values"})
    rng = np.random.default_rng(seed)
    M = ols_error_norm(ds) if variant == "A" else None
    cands = _candidates(ds, variant, trials, rng)
    counts = np.concatenate([_counts(ds, variant, chunk, delta, M) for chunk in np.array_split(cands, max(1, cands.shape[0] // 256))])
    j = int(np.argmax(counts))
    best_count, best = int(counts[j]), cands[j]
    verdict = "not-falsified"
    if best_count > eps * n:
        # recheck from scratch before claiming a proof
        if small_count(ds, variant, best, delta) > eps * n:
            verdict = "falsified"
    return AcReport(variant, eps, delta, best_count / n, best, verdict, {"candidates": int(cands.shape[0])})
