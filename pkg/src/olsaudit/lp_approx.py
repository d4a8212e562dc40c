"""Region-partition approximation of the fractional stability.

The partition equations make every residual keep its sign on each region,
and on a random subsample also pin its magnitude to a ``1 + eps`` band.  On
each region the removal problem then becomes an LP in ``g_i = w_i r_i(lam)``
whose objective uses the residuals at a fixed representative point.  The
reconstructed weights are always feasible, so the estimate is a sound upper
bound; when too many residuals at some representative are tiny the
anti-concentration premise is refuted instead and ``Bottom`` is returned.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from . import lp
from .bounds import UPPER, StabilityBound
from .ols import Dataset, ols_error_norm, residuals, zero_treatment_fit
from .regions import SIGN_TOL, Region, build_partition_equations, generate_regions, representative, residual_intervals

BOTTOM = "bottom"
ESTIMATE = "estimate"


@dataclass(frozen=True)
class LpApproxConfig:
    eps: float = 0.1
    delta: float = 0.1
    eta: float = 0.1
    C_vc: float = 1.0
    seed: int = 0
    m_override: Optional[int] = None

    def __post_init__(self):
        for name in ("eps", "delta", "eta"):
            val = getattr(self, name)
            if not 0 < val <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {val}")
        if self.C_vc <= 0:
            raise ValueError("C_vc must be positive")
        if self.m_override is not None and self.m_override < 1:
            raise ValueError("m_override must be at least 1")

    def subsample_size(self, n: int, d: int) -> int:
        if self.m_override is not None:
            return int(min(self.m_override, n))
        m = math.ceil(self.C_vc / self.eps * (d * math.log(1 / self.eps) + math.log(1 / self.eta)))
        return int(min(max(m, 1), n))


@dataclass
class LpApproxResult:
    outcome: str
    S_hat: Optional[float] = None
    best_region_id: Optional[int] = None
    certificate: Dict[str, Any] = field(default_factory=dict)

    @property
    def is_bottom(self) -> bool:
        return self.outcome == BOTTOM

    def as_bound(self) -> StabilityBound:
        if self.is_bottom:
            raise ValueError("a Bottom outcome carries no bound")
        return StabilityBound(self.S_hat, UPPER, "lpapprox", dict(self.certificate, region=self.best_region_id))


def reconstruct_weights(ds: Dataset, g, lam) -> np.ndarray:
    """``w_i = g_i / r_i(lam)`` clipped to ``[0, 1]``; vanishing residuals get 1."""
    r = residuals(ds, lam)
    zero = np.abs(r) <= 1e-10 * (1.0 + np.max(np.abs(ds.y)))
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(zero, 1.0, np.asarray(g) / np.where(zero, 1.0, r))
    return np.clip(w, 0.0, 1.0)


def region_estimate(ds: Dataset, region: Region, r0, M: float, delta: float, method=None):
    """Solve the per-region program; returns (V_hat, g, lam, w)."""
    n, p = ds.n, ds.d - 1
    X, Xc, y = ds.X, ds.controls, ds.y
    if p:
        l, r = residual_intervals(ds, region, method)
    else:
        l = r = -np.asarray(y, dtype=float)
    pos = l >= -SIGN_TOL
    neg = ~pos  # by construction r <= sign_tol here; ties went to +1
    base = delta * M / math.sqrt(n)
    free = ~((np.abs(r0) > M) | (np.abs(r0) < base))
    fidx = np.flatnonzero(free)
    k = fidx.size
    nv = n + p + k

    cost = np.zeros(nv)
    cost[n + p :] = 1.0
    lo = np.full(nv, -np.inf)
    hi = np.full(nv, np.inf)
    lo[:n] = np.where(pos, 0.0, -np.inf)
    hi[:n] = np.where(neg, 0.0, np.inf)
    hi[n + p :] = 1.0

    rows, rel, rhs = [], [], []
    rows.append(np.hstack([X.T, np.zeros((ds.d, p + k))]))
    rel += [lp.EQ] * ds.d
    rhs.append(np.zeros(ds.d))
    # sign-consistent magnitude caps: g_i <= r_i(lam) (sigma=+1), g_i >= r_i(lam) (sigma=-1)
    for mask, sense in ((pos, lp.LE), (neg, lp.GE)):
        idx = np.flatnonzero(mask)
        if idx.size:
            blk = np.zeros((idx.size, nv))
            blk[np.arange(idx.size), idx] = 1.0
            blk[:, n : n + p] = -Xc[idx]
            rows.append(blk)
            rel += [sense] * idx.size
            rhs.append(-y[idx])
    if k:
        blk = np.zeros((k, nv))
        blk[np.arange(k), n + p + np.arange(k)] = 1.0
        blk[np.arange(k), fidx] = -1.0 / r0[fidx]
        rows.append(blk)
        rel += [lp.LE] * k
        rhs.append(np.zeros(k))
    if region.h.size:
        blk = np.zeros((region.h.size, nv))
        blk[:, n : n + p] = region.G
        rows.append(blk)
        rel += [lp.LE] * region.h.size
        rhs.append(region.h)
    sol = lp.solve(lp.LPProblem(cost, np.vstack(rows), rel, np.concatenate(rhs), lo, hi, maximize=True), method)
    if not sol.optimal:
        raise lp.SolverError(f"region program on region {region.id} reported {sol.status.value}")
    g = sol.x[:n]
    lam = sol.x[n : n + p]
    w = reconstruct_weights(ds, g, lam)
    return float(w.sum()), g, lam, w


def lp_approx_stability(ds: Dataset, cfg: LpApproxConfig = LpApproxConfig(), method=None) -> LpApproxResult:
    lam0 = zero_treatment_fit(ds)
    if lam0 is not None:
        return LpApproxResult(ESTIMATE, 0.0, None, {"lambda": lam0, "w": np.ones(ds.n), "exact_fit": True})
    M = ols_error_norm(ds)
    if M <= 1e-12 * (1.0 + np.linalg.norm(ds.y)):
        raise ValueError("the data are interpolated by OLS but no interpolant has a zero treatment coefficient")

    n = ds.n
    m = cfg.subsample_size(n, ds.d)
    hs, subset = build_partition_equations(ds, cfg.eps, cfg.delta, m, cfg.seed, M=M)
    regions = generate_regions(hs, dim=ds.d - 1, method=method)
    base = cfg.delta * M / math.sqrt(n)

    reps = []
    for reg in regions:
        lam_r = representative(reg, method)
        r0 = residuals(ds, lam_r)
        small = int(np.sum(np.abs(r0) < base))
        if small > cfg.eps * n:
            return LpApproxResult(
                BOTTOM,
                None,
                reg.id,
                {"witness_lambda": lam_r, "small_residuals": small, "threshold": base, "region": reg.id},
            )
        reps.append(r0)

    best = None
    for reg, r0 in zip(regions, reps):
        V, g, lam, w = region_estimate(ds, reg, r0, M, cfg.delta, method)
        if best is None or V > best[0]:
            best = (V, reg.id, g, lam, w)
        if best[0] >= n:
            break  # nothing can beat keeping everything
    V, rid, g, lam, w = best
    S_hat = float(min(max(n - w.sum(), 0.0), n))
    return LpApproxResult(
        ESTIMATE,
        S_hat,
        rid,
        {"g": g, "lambda": lam, "w": w, "V": V, "num_regions": len(regions), "subsample": subset},
    )
