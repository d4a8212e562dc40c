"""Unconditional lower bound on the fractional stability.

Control-coefficient space is cut into regions by residual hyperplanes of a
random subsample.  Inside a region every sample's residual ranges over an
interval ``[l_i, r_i]``; with the substitution ``g_i = (1 - w_i) r_i(lam)``
the removal problem restricted to the region relaxes to an LP whose value
can only undershoot the true restricted optimum.  A second, independent
bound per region comes from the residual mass: the retained weighted squared
residuals can never exceed the unweighted OLS error.  The minimum over
regions of the larger of the two is a valid lower bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import lp
from .bounds import LOWER, StabilityBound
from .ols import Dataset, ols_error_norm, zero_treatment_fit
from .regions import SIGN_TOL, Hyperplane, Region, generate_regions, residual_intervals


@dataclass(frozen=True)
class LowerBoundConfig:
    thresholds: Sequence[float] = (0.0,)
    m: Optional[int] = None  # defaults to min(n, 30)
    seed: int = 0

    def __post_init__(self):
        if self.m is not None and self.m < 1:
            raise ValueError("m must be at least 1")
        if not all(np.isfinite(t) for t in self.thresholds):
            raise ValueError("thresholds must be finite")


@dataclass
class RegionLowerData:
    S_hat_R: float
    N_hat_R: float
    region_id: int

    @property
    def value(self) -> float:
        return max(self.S_hat_R, self.N_hat_R)


def residual_mass_bound(Q: np.ndarray, M2: float) -> int:
    """Largest ``k`` such that the ``n - k`` smallest ``Q`` already exceed ``M2``."""
    n = Q.shape[0]
    csum = np.concatenate([[0.0], np.cumsum(np.sort(Q))])  # csum[j] = sum of j smallest
    over = np.flatnonzero(csum > M2)
    if over.size == 0:
        return 0
    return int(n - over[0])


def _sign_classes(l, r):
    pos = l >= -SIGN_TOL
    neg = (r <= SIGN_TOL) & ~pos
    return pos, neg


def region_program(ds: Dataset, region: Region, l, r, method=None):
    """Solve the relaxed removal LP for one region; returns (value, g, lam)."""
    n, p = ds.n, ds.d - 1
    X, Xc, y = ds.X, ds.controls, ds.y
    pos, neg = _sign_classes(l, r)

    cost = np.zeros(n + p)
    with np.errstate(divide="ignore"):
        cpos = np.where(np.isfinite(r) & (np.abs(r) > SIGN_TOL), 1.0 / r, 0.0)
        cneg = np.where(np.isfinite(l) & (np.abs(l) > SIGN_TOL), 1.0 / l, 0.0)
    cost[:n] = np.where(pos, cpos, np.where(neg, cneg, 0.0))

    lo = np.full(n + p, -np.inf)
    hi = np.full(n + p, np.inf)
    lo[:n] = np.where(pos, 0.0, l)
    hi[:n] = np.where(neg, 0.0, r)

    rows, rel, rhs = [], [], []
    # X^T g - X^T Xc lam = -X^T y
    rows.append(np.hstack([X.T, -X.T @ Xc]))
    rel += [lp.EQ] * ds.d
    rhs.append(-X.T @ y)
    # g_i - Xc_i lam <= -y_i  (K+)   and   >= -y_i  (K-); without controls the
    # interval bounds on g already say this
    for mask, sense in ((pos, lp.LE), (neg, lp.GE)):
        idx = np.flatnonzero(mask)
        if idx.size and p:
            blk = np.zeros((idx.size, n + p))
            blk[np.arange(idx.size), idx] = 1.0
            blk[:, n:] = -Xc[idx]
            rows.append(blk)
            rel += [sense] * idx.size
            rhs.append(-y[idx])
    if region.h.size:
        rows.append(np.hstack([np.zeros((region.h.size, n)), region.G]))
        rel += [lp.LE] * region.h.size
        rhs.append(region.h)
    prob = lp.LPProblem(cost, np.vstack(rows), rel, np.concatenate(rhs), lo, hi)
    sol = lp.solve(prob, method)
    if not sol.optimal:
        # g = residuals at any lam in the region is feasible and the cost is non-negative
        raise lp.SolverError(f"lower-bound LP on region {region.id} reported {sol.status.value}")
    return max(sol.value, 0.0), sol.x[:n], sol.x[n:]


def region_lower_data(ds: Dataset, region: Region, M2: float, method=None) -> RegionLowerData:
    if region.dim == 0:
        l = r = -np.asarray(ds.y, dtype=float)
    else:
        l, r = residual_intervals(ds, region, method)
    S_hat, _, _ = region_program(ds, region, l, r, method)
    pos, neg = _sign_classes(l, r)
    lf = np.where(np.isfinite(l), l, np.nan)
    rf = np.where(np.isfinite(r), r, np.nan)
    Q = np.nan_to_num(np.fmin(lf**2, rf**2), nan=0.0)
    Q = np.where(pos | neg, Q, 0.0)
    return RegionLowerData(S_hat, float(residual_mass_bound(Q, M2)), region.id)


def lower_bound_regions(ds: Dataset, cfg: LowerBoundConfig, method=None) -> List[Region]:
    p = ds.d - 1
    if p == 0:
        return generate_regions([], dim=0)
    m = min(ds.n, 30) if cfg.m is None else min(cfg.m, ds.n)
    rng = np.random.default_rng(cfg.seed)
    idx = np.sort(rng.choice(ds.n, size=m, replace=False))
    hs = [Hyperplane(ds.controls[i], ds.y[i] + t) for t in cfg.thresholds for i in idx]
    return generate_regions(hs, dim=p, method=method)


def lp_lower_bound(ds: Dataset, cfg: LowerBoundConfig = LowerBoundConfig(), method=None) -> StabilityBound:
    """``min`` over regions of ``max(LP relaxation, residual-mass bound)``."""
    if zero_treatment_fit(ds) is not None:
        return StabilityBound(0.0, LOWER, "lower", {"exact_fit": True, "regions": []})
    M2 = ols_error_norm(ds) ** 2
    regions = lower_bound_regions(ds, cfg, method)
    data = [region_lower_data(ds, reg, M2, method) for reg in regions]
    vals = np.array([dd.value for dd in data])
    best = int(np.argmin(vals))
    value = float(min(max(vals[best], 0.0), ds.n))
    return StabilityBound(
        value,
        LOWER,
        "lower",
        {"regions": data, "binding_region": data[best].region_id, "num_regions": len(data)},
    )
