"""Cells of a hyperplane arrangement in control-coefficient space.

Regions are closed polyhedra ``{lam : G lam <= h}`` produced by recursive
splitting: each hyperplane ``<v, lam> = c`` is tested against every current
region and splits it in two when ``c`` lies strictly inside the range of
``<v, lam>`` over the region.

Range queries (``inf``/``sup`` of a linear function over a region) are the
workhorse.  They are answered in closed form when lambda-space is a line, by
enumerating vertices and extreme rays when the region has few constraints,
and by LP otherwise.
"""
from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import lp
from .ols import Dataset, ols_error_norm

SPLIT_TOL = 1e-9
SIGN_TOL = 1e-9
# vertex enumeration is used while C(#constraints, dim) stays below this
ENUM_MAX_COMBOS = 20_000


@dataclass(frozen=True)
class Hyperplane:
    """``<v, lam> = c``."""

    v: np.ndarray
    c: float

    def normalized(self):
        v = np.asarray(self.v, dtype=float).reshape(-1)
        nv = np.linalg.norm(v)
        if nv == 0:
            return None
        return v / nv, float(self.c) / nv


class Region:
    """Closed polyhedron ``G lam <= h`` with unit-norm rows of ``G``."""

    def __init__(self, G, h, id: int = 0, dim: Optional[int] = None):
        G = np.asarray(G, dtype=float)
        if dim is None:
            dim = G.shape[1] if G.ndim == 2 else 0
        self.G = G.reshape(-1, dim) if dim else np.zeros((0, 0))
        self.h = np.asarray(h, dtype=float).reshape(-1)
        self.id = id
        self.dim = dim

    @property
    def constraints(self):
        return [(g, lp.LE, c) for g, c in zip(self.G, self.h)]

    def with_constraint(self, g, c, rel: str) -> "Region":
        if rel == lp.GE:
            g, c = -g, -c
        return Region(np.vstack([self.G, g]), np.append(self.h, c), self.id, self.dim)

    def contains(self, lam, tol: float = lp.FEAS_TOL) -> bool:
        lam = np.asarray(lam, dtype=float).reshape(-1)
        if not self.h.size:
            return True
        return bool(np.all(self.G @ lam - self.h <= tol * (1 + np.abs(self.h))))

    def __repr__(self):
        return f"Region(id={self.id}, dim={self.dim}, constraints={self.h.size})"


# --------------------------------------------------------------------------
# range queries
# --------------------------------------------------------------------------


def _interval_1d(region: Region):
    g = region.G[:, 0]
    h = region.h
    up = g > 0
    dn = g < 0
    a = np.max(h[dn] / g[dn]) if dn.any() else -np.inf
    b = np.min(h[up] / g[up]) if up.any() else np.inf
    return a, b


def _extents_1d(region: Region, V: np.ndarray):
    a, b = _interval_1d(region)
    v = V[:, 0]
    with np.errstate(invalid="ignore"):
        p, q = v * a, v * b
    p = np.where(v == 0, 0.0, p)
    q = np.where(v == 0, 0.0, q)
    return np.minimum(p, q), np.maximum(p, q)


def _extents_lp(region: Region, V: np.ndarray, method=None):
    lo = np.empty(V.shape[0])
    hi = np.empty(V.shape[0])
    for k, v in enumerate(V):
        for sense, out in ((False, lo), (True, hi)):
            prob = lp.LPProblem(v, region.G, [lp.LE] * region.h.size, region.h, -np.inf, np.inf, maximize=sense)
            sol = lp.solve(prob, method)
            if sol.status is lp.Status.UNBOUNDED:
                out[k] = np.inf if sense else -np.inf
            elif sol.optimal:
                out[k] = sol.value
            else:
                raise lp.SolverError(f"range query on region {region.id} reported {sol.status.value}")
    return lo, hi


def _vertices_and_rays(G: np.ndarray, h: np.ndarray):
    """Vertices and extreme rays of a pointed polyhedron ``G x <= h``."""
    k, q = G.shape
    tol = 1e-9 * (1.0 + np.abs(h))
    combos = np.array(list(itertools.combinations(range(k), q)), dtype=int).reshape(-1, q)
    subs = G[combos]
    ok = np.abs(np.linalg.det(subs)) >= 1e-12
    verts = np.zeros((0, q))
    if ok.any():
        x = np.linalg.solve(subs[ok], h[combos[ok]][..., None])[..., 0]
        slack = x @ G.T - h
        feas = np.all(slack <= tol * (1.0 + np.abs(x).max(axis=1, keepdims=True)), axis=1)
        verts = x[feas]
    if q == 1:
        cands = np.array([[1.0], [-1.0]])
    else:
        combos = np.array(list(itertools.combinations(range(k), q - 1)), dtype=int).reshape(-1, q - 1)
        _, s, vt = np.linalg.svd(G[combos])
        good = s[:, -1] >= 1e-12
        d = vt[good, -1, :]
        cands = np.vstack([d, -d])
    rays = cands[np.all(cands @ G.T <= 1e-10, axis=1)] if cands.size else cands.reshape(0, q)
    return verts, rays


def range_over_region(region: Region, V, method=None):
    """Row-wise ``inf`` and ``sup`` of ``V @ lam`` over the region.

    Unbounded directions give ``-inf`` / ``+inf``.
    """
    V = np.asarray(V, dtype=float).reshape(-1, region.dim)
    if region.dim == 0:
        z = np.zeros(V.shape[0])
        return z, z.copy()
    if region.dim == 1:
        return _extents_1d(region, V)
    G, h = region.G, region.h
    if h.size == 0:
        vn = np.linalg.norm(V, axis=1) > 0
        return np.where(vn, -np.inf, 0.0), np.where(vn, np.inf, 0.0)

    # split off the lineality space: directions along which the region is a cylinder
    _, s, vt = np.linalg.svd(G, full_matrices=True)
    rank = int(np.sum(s > 1e-10 * s[0]))
    P = vt[:rank].T  # basis of the row space
    N = vt[rank:].T  # lineality space
    if math.comb(h.size, rank) > ENUM_MAX_COMBOS:
        return _extents_lp(region, V, method)
    Gp = G @ P
    verts, rays = _vertices_and_rays(Gp, h)
    if verts.shape[0] == 0:
        return _extents_lp(region, V, method)
    Vp = V @ P
    vals = Vp @ verts.T
    lo = vals.min(axis=1)
    hi = vals.max(axis=1)
    vscale = np.linalg.norm(V, axis=1)
    if rays.shape[0]:
        rv = Vp @ rays.T
        lo = np.where(np.any(rv < -1e-10 * vscale[:, None], axis=1), -np.inf, lo)
        hi = np.where(np.any(rv > 1e-10 * vscale[:, None], axis=1), np.inf, hi)
    if N.shape[1]:
        cyl = np.linalg.norm(V @ N, axis=1) > 1e-10 * np.maximum(vscale, 1e-300)
        lo = np.where(cyl, -np.inf, lo)
        hi = np.where(cyl, np.inf, hi)
    return lo, hi


def residual_intervals(ds: Dataset, region: Region, method=None):
    """``(l, r)``: range of ``Xc_i @ lam - y_i`` over the region, for every sample."""
    lo, hi = range_over_region(region, ds.controls, method)
    return lo - ds.y, hi - ds.y


def residual_interval(ds: Dataset, region: Region, i: int, method=None):
    lo, hi = range_over_region(region, ds.controls[i : i + 1], method)
    return float(lo[0] - ds.y[i]), float(hi[0] - ds.y[i])


# --------------------------------------------------------------------------
# arrangement
# --------------------------------------------------------------------------


def _generate_1d(planes) -> List[Region]:
    # cells of the real line are intervals between accepted breakpoints
    cuts: List[float] = []
    for v, c in planes:
        t = c / v[0]
        tol = SPLIT_TOL * (1.0 + abs(c))
        # the cell containing t strictly in its interior (if any)
        j = bisect.bisect_left(cuts, t)
        left = cuts[j - 1] if j > 0 else -np.inf
        right = cuts[j] if j < len(cuts) else np.inf
        # compare in units of <v, lam> as the general path does (|v| = 1 here)
        if abs(t - left) > tol and abs(right - t) > tol:
            cuts.insert(j, t)
    bounds = [-np.inf] + cuts + [np.inf]
    regions = []
    for k in range(len(bounds) - 1):
        G, h = [], []
        if np.isfinite(bounds[k]):
            G.append([-1.0])
            h.append(-bounds[k])
        if np.isfinite(bounds[k + 1]):
            G.append([1.0])
            h.append(bounds[k + 1])
        regions.append(Region(np.array(G).reshape(-1, 1), h, k, 1))
    return regions


def generate_regions(hs: Sequence[Hyperplane], dim: Optional[int] = None, method=None) -> List[Region]:
    """Split lambda-space by every hyperplane in ``hs`` (in order).

    ``dim`` is the dimension of lambda-space; it defaults to the length of
    the first hyperplane's normal.  ``dim == 0`` yields the one trivial
    region.  Hyperplanes with a zero normal never split anything.
    """
    if dim is None:
        if not hs:
            raise ValueError("dim is required when no hyperplanes are given")
        dim = np.asarray(hs[0].v).reshape(-1).shape[0]
    if dim == 0:
        return [Region(np.zeros((0, 0)), [], 0, 0)]
    planes = [p for p in (h.normalized() for h in hs) if p is not None]
    if dim == 1:
        return _generate_1d(planes)

    regions = [Region(np.zeros((0, dim)), [], 0, dim)]
    for v, c in planes:
        tol = SPLIT_TOL * (1.0 + abs(c))
        nxt = []
        for reg in regions:
            lo, hi = range_over_region(reg, v[None, :], method)
            if lo[0] < c - tol and hi[0] > c + tol:
                nxt.append(reg.with_constraint(v, c, lp.LE))
                nxt.append(reg.with_constraint(v, c, lp.GE))
            else:
                nxt.append(reg)
        regions = nxt
    for k, reg in enumerate(regions):
        reg.id = k
    return regions


def representative(region: Region, method=None) -> np.ndarray:
    """A well-inside point of the region (Chebyshev center, boxed if unbounded)."""
    if region.dim == 0:
        return np.zeros(0)
    G, h = region.G, region.h
    # box radius for unbounded cells; proportional to the offsets so that rescaling the
    # responses rescales the representative
    hmax = float(np.max(np.abs(h))) if h.size else 0.0
    R = 10.0 * hmax if hmax > 0 else 10.0
    if region.dim == 1:
        a, b = _interval_1d(region)
        if a > b + SPLIT_TOL * (1 + abs(a)):
            raise ValueError(f"region {region.id} is empty")
        if np.isfinite(a) and np.isfinite(b):
            return np.array([(a + b) / 2])
        if np.isfinite(a):
            return np.array([a + R])
        if np.isfinite(b):
            return np.array([b - R])
        return np.zeros(1)
    if h.size == 0:
        return np.zeros(region.dim)

    dim = region.dim
    cost = np.zeros(dim + 1)
    cost[-1] = 1.0
    A = np.column_stack([G, np.ones(h.size)])
    sol = lp.solve(lp.LPProblem(cost, A, [lp.LE] * h.size, h, [-np.inf] * dim + [0.0], np.inf, maximize=True), method)
    if sol.optimal:
        return sol.x[:dim]
    if sol.status is lp.Status.INFEASIBLE:
        raise ValueError(f"region {region.id} is empty")
    # unbounded inradius: centre a ball inside a growing box
    for _ in range(60):
        box = np.vstack([np.eye(dim), -np.eye(dim)])
        Ab = np.vstack([A, np.column_stack([box, np.ones(2 * dim)])])
        hb = np.concatenate([h, np.full(2 * dim, R)])
        sol = lp.solve(lp.LPProblem(cost, Ab, [lp.LE] * hb.size, hb, [-np.inf] * dim + [0.0], np.inf, maximize=True), method)
        if sol.optimal:
            return sol.x[:dim]
        R *= 2.0
    raise lp.SolverError(f"could not find a representative for region {region.id}")


# --------------------------------------------------------------------------
# partition equations
# --------------------------------------------------------------------------


def geometric_levels(n: int, eps: float, delta: float) -> int:
    """Largest exponent ``k`` of the geometric residual thresholds."""
    return int(math.ceil(math.log(math.sqrt(n) / delta) / math.log1p(eps) - 1e-12))


def build_partition_equations(ds: Dataset, eps: float, delta: float, m: int, seed=0, M: Optional[float] = None):
    """Residual-threshold hyperplanes ``Xc_i @ lam - y_i = t``.

    For every sample ``t`` ranges over ``0, +-M, +-delta M / sqrt(n)``; for a
    random size-``m`` subset the geometric ladder ``+-(1+eps)^k delta M /
    sqrt(n)``, ``k = 0..K`` is added as well.  ``M`` defaults to the OLS
    error norm.  Returns ``(hyperplanes, subset)``.
    """
    if eps <= 0 or delta <= 0:
        raise ValueError("eps and delta must be positive")
    n = ds.n
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in [1, {n}]")
    M = ols_error_norm(ds) if M is None else M
    base = delta * M / math.sqrt(n)
    Xc, y = ds.controls, ds.y
    hs = []
    for t in (0.0, M, -M, base, -base):
        hs.extend(Hyperplane(Xc[i], y[i] + t) for i in range(n))
    rng = np.random.default_rng(seed)
    subset = np.sort(rng.choice(n, size=m, replace=False))
    K = max(geometric_levels(n, eps, delta), 0)
    for k in range(K + 1):
        t = (1.0 + eps) ** k * base
        for i in subset:
            hs.append(Hyperplane(Xc[i], y[i] + t))
            hs.append(Hyperplane(Xc[i], y[i] - t))
    return hs, subset
