"""Linear programs: a small problem/solution model and two interchangeable solvers.

``solve`` accepts an :class:`LPProblem` in general form (``<=``, ``>=`` and
``=`` rows, per-variable bounds that may be infinite) and dispatches to one
of two backends:

``"simplex"``
    A dense bounded-variable two-phase primal simplex written here.
    Dantzig pricing, falling back to Bland's rule after a run of degenerate
    pivots; the tableau is refactorized from the original data periodically
    and before optimality is declared.
``"highs"``
    ``scipy.optimize.linprog(method="highs")``.

Both backends see the same column-scaled problem and their answers go
through the same feasibility audit, so a numerically bad answer raises
:class:`SolverError` instead of being returned.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

log = logging.getLogger(__name__)

FEAS_TOL = 1e-7

LE, GE, EQ = "<=", ">=", "="
_RELATIONS = (LE, GE, EQ)


class SolverError(RuntimeError):
    """The LP backend failed numerically or hit its iteration limit."""


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LPProblem:
    """``optimize c @ x`` subject to ``A[k] @ x  rel[k]  b[k]`` and ``lo <= x <= hi``."""

    c: np.ndarray
    A: np.ndarray
    rel: Sequence[str]
    b: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    maximize: bool = False

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).reshape(-1)
        nv = self.c.shape[0]
        self.A = np.asarray(self.A, dtype=float).reshape(-1, nv)
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        self.rel = list(self.rel)
        self.lo = np.broadcast_to(np.asarray(self.lo, dtype=float), (nv,)).copy()
        self.hi = np.broadcast_to(np.asarray(self.hi, dtype=float), (nv,)).copy()
        if self.A.shape[0] != self.b.shape[0] or len(self.rel) != self.b.shape[0]:
            raise ValueError("A, rel and b must describe the same number of rows")
        if any(r not in _RELATIONS for r in self.rel):
            raise ValueError(f"relations must be one of {_RELATIONS}")
        if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.b)) and np.all(np.isfinite(self.c))):
            raise ValueError("LP coefficients must be finite")
        if np.any(np.isnan(self.lo)) or np.any(np.isnan(self.hi)) or np.any(self.lo == np.inf) or np.any(self.hi == -np.inf):
            raise ValueError("invalid variable bounds")

    @property
    def num_vars(self) -> int:
        return self.c.shape[0]

    @classmethod
    def build(cls, c, rows=(), lo=0.0, hi=np.inf, maximize=False):
        """Convenience constructor from ``(coeffs, relation, rhs)`` triples."""
        c = np.asarray(c, dtype=float).reshape(-1)
        rows = list(rows)
        A = np.array([r[0] for r in rows], dtype=float).reshape(len(rows), c.shape[0])
        return cls(c, A, [r[1] for r in rows], [r[2] for r in rows], lo, hi, maximize)

    def objective(self, x) -> float:
        return float(self.c @ x)

    def max_violation(self, x) -> float:
        """Largest constraint or bound violation at ``x`` (unscaled)."""
        x = np.asarray(x, dtype=float)
        viol = 0.0
        if self.A.shape[0]:
            ax = self.A @ x
            rel = np.asarray(self.rel)
            diff = ax - self.b
            v = np.where(rel == LE, np.maximum(diff, 0), np.where(rel == GE, np.maximum(-diff, 0), np.abs(diff)))
            viol = max(viol, float(v.max()))
        if x.size:
            viol = max(viol, float(np.max(np.maximum(self.lo - x, 0))), float(np.max(np.maximum(x - self.hi, 0))))
        return viol


@dataclass
class LPSolution:
    status: Status
    value: Optional[float] = None
    x: Optional[np.ndarray] = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


DEFAULT_METHOD = "auto"
# problems with at most this many matrix entries go to the built-in simplex under "auto"
AUTO_SIMPLEX_MAX_ENTRIES = 40_000


def solve(p: LPProblem, method: Optional[str] = None) -> LPSolution:
    """Solve ``p``; ``method`` is ``"simplex"``, ``"highs"`` or ``"auto"``."""
    method = method or DEFAULT_METHOD
    if method == "auto":
        method = "simplex" if p.A.size <= AUTO_SIMPLEX_MAX_ENTRIES else "highs"
    if method not in ("simplex", "highs"):
        raise ValueError(f"unknown LP method {method!r}")

    # column scaling to unit max-abs; x = scale * x_scaled
    scale = np.ones(p.num_vars)
    if p.A.size:
        colmax = np.max(np.abs(p.A), axis=0)
        nz = colmax > 0
        scale[nz] = 1.0 / colmax[nz]
    if method == "simplex":
        return _solve_scaled(p, scale, method)
    # HiGHS has misreported feasibility on some wide, nearly degenerate programs: retry
    # unscaled, then let the simplex arbitrate
    for s in (scale, np.ones(p.num_vars)):
        try:
            sol = _solve_scaled(p, s, method)
        except SolverError as exc:
            log.debug("HiGHS attempt failed: %s", exc)
            continue
        if sol.status is Status.OPTIMAL:
            return sol
    return _solve_scaled(p, scale, "simplex")


def _solve_scaled(p: LPProblem, scale, method) -> LPSolution:
    As = p.A * scale
    cs = p.c * scale
    los = p.lo / scale
    his = p.hi / scale

    if method == "simplex":
        sol = _solve_simplex(cs, As, p.rel, p.b, los, his, p.maximize)
    else:
        sol = _solve_highs(cs, As, p.rel, p.b, los, his, p.maximize)

    if sol.status is not Status.OPTIMAL:
        return sol
    xs = sol.x
    scaled = LPProblem(cs, As, p.rel, p.b, los, his, p.maximize)
    bscale = np.maximum(1.0, np.abs(p.b)) if p.b.size else p.b
    viol = _scaled_violation(scaled, xs, bscale)
    if viol > FEAS_TOL:
        raise SolverError(f"{method} returned a point violating constraints by {viol:.3g}")
    x = xs * scale
    # snap tiny bound overshoot caused by unscaling
    x = np.minimum(np.maximum(x, p.lo), p.hi)
    return LPSolution(Status.OPTIMAL, float(p.c @ x), x, sol.iterations)


def _scaled_violation(p: LPProblem, x, bscale) -> float:
    viol = 0.0
    if p.A.shape[0]:
        rel = np.asarray(p.rel)
        diff = (p.A @ x - p.b) / bscale
        v = np.where(rel == LE, np.maximum(diff, 0), np.where(rel == GE, np.maximum(-diff, 0), np.abs(diff)))
        viol = float(v.max())
    if x.size:
        lo_v = np.where(np.isfinite(p.lo), (p.lo - x) / np.maximum(1, np.abs(np.where(np.isfinite(p.lo), p.lo, 0))), 0)
        hi_v = np.where(np.isfinite(p.hi), (x - p.hi) / np.maximum(1, np.abs(np.where(np.isfinite(p.hi), p.hi, 0))), 0)
        viol = max(viol, float(np.max(lo_v)), float(np.max(hi_v)))
    return viol


# --------------------------------------------------------------------------
# HiGHS adapter
# --------------------------------------------------------------------------


def _solve_highs(c, A, rel, b, lo, hi, maximize) -> LPSolution:
    from scipy.optimize import linprog

    rel = np.asarray(rel)
    le, ge, eq = rel == LE, rel == GE, rel == EQ
    A_ub = np.vstack([A[le], -A[ge]]) if (le.any() or ge.any()) else None
    b_ub = np.concatenate([b[le], -b[ge]]) if A_ub is not None else None
    A_eq = A[eq] if eq.any() else None
    b_eq = b[eq] if eq.any() else None
    bounds = [(None if not np.isfinite(l) else l, None if not np.isfinite(h) else h) for l, h in zip(lo, hi)]
    sign = -1.0 if maximize else 1.0
    if c.size == 0:
        # linprog needs at least one variable
        return _solve_simplex(c, A, list(rel), b, lo, hi, maximize)
    kw = dict(A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    res = linprog(sign * c, **kw)
    if res.status != 0:
        # presolve occasionally misjudges feasibility on wide, nearly degenerate programs
        res = linprog(sign * c, options={"presolve": False}, **kw)
    if res.status == 0:
        return LPSolution(Status.OPTIMAL, float(c @ res.x), np.asarray(res.x), int(getattr(res, "nit", 0)))
    if res.status == 2:
        return LPSolution(Status.INFEASIBLE)
    if res.status == 3:
        return LPSolution(Status.UNBOUNDED)
    raise SolverError(f"HiGHS failed: {res.message}")


# --------------------------------------------------------------------------
# bounded-variable two-phase simplex
# --------------------------------------------------------------------------

_PIV_TOL = 1e-9
_OPT_TOL = 1e-9
_REFACTOR_EVERY = 60
_DEGENERATE_RUN = 40
# columns examined per batch of bound flips
_FLIP_BATCH = 32


class _Tableau:
    """Dense tableau for ``min cost @ z``, ``M z = rhs``, ``0 <= z <= ub``."""

    def __init__(self, M, rhs, ub, basis, at_upper):
        self.M = M
        self.rhs = rhs
        self.ub = ub
        self.basis = np.array(basis, dtype=int)
        self.at_upper = at_upper  # boolean per column, meaningful for nonbasic columns
        self.m, self.N = M.shape
        self.is_basic = np.zeros(self.N, dtype=bool)
        self.is_basic[self.basis] = True
        self.iterations = 0
        self.refactor()

    def nonbasic_values(self):
        z = np.where(self.at_upper, self.ub, 0.0)
        z[self.is_basic] = 0.0
        return z

    def refactor(self):
        if self.m == 0:
            self.T = np.zeros((0, self.N))
            self.xB = np.zeros(0)
            return
        B = self.M[:, self.basis]
        try:
            self.T = np.linalg.solve(B, self.M)
            zN = self.nonbasic_values()
            self.xB = np.linalg.solve(B, self.rhs - self.M @ zN)
        except np.linalg.LinAlgError as exc:
            raise SolverError("simplex basis became singular") from exc
        if not (np.all(np.isfinite(self.T)) and np.all(np.isfinite(self.xB))):
            raise SolverError("simplex basis became ill-conditioned")

    def values(self):
        z = self.nonbasic_values()
        z[self.basis] = self.xB
        return z

    def run(self, cost, max_iter, allowed=None):
        """Primal simplex from the current (primal feasible) basis.

        Returns ``"optimal"`` or ``"unbounded"``.
        """
        if allowed is None:
            allowed = np.ones(self.N, dtype=bool)
        movable = allowed & (self.ub > 0)
        bland = False
        degenerate_run = 0
        since_refactor = 0
        rechecks = 0
        while True:
            if self.iterations >= max_iter:
                raise SolverError(f"simplex iteration limit ({max_iter}) reached")
            d = cost - cost[self.basis] @ self.T
            # improvement rate of moving each nonbasic column off its bound
            gain = np.where(self.at_upper, d, -d)
            gain[~movable | self.is_basic] = -np.inf
            if bland:
                hits = np.flatnonzero(gain > _OPT_TOL)
                j = int(hits[0]) if hits.size else -1
            else:
                j = int(np.argmax(gain))
                if gain[j] <= _OPT_TOL:
                    j = -1
            if j < 0:
                if since_refactor == 0 or rechecks > 3:
                    return "optimal"
                self.refactor()
                since_refactor = 0
                rechecks += 1
                continue
            if not bland and self.m:
                j = self._batch_flips(gain)
                if j < 0:
                    since_refactor += 1
                    degenerate_run = 0
                    continue
            direction = -1.0 if self.at_upper[j] else 1.0
            alpha = self.T[:, j] * direction
            # ratio test; basic values move by -theta * alpha
            theta = self.ub[j]
            leave = -1
            leave_to_upper = False
            if self.m:
                ubB = self.ub[self.basis]
                dec = alpha > _PIV_TOL
                inc = (alpha < -_PIV_TOL) & np.isfinite(ubB)
                ratios = np.full(self.m, np.inf)
                ratios[dec] = np.maximum(self.xB[dec], 0.0) / alpha[dec]
                ratios[inc] = np.maximum(ubB[inc] - self.xB[inc], 0.0) / (-alpha[inc])
                rmin = ratios.min()
                if rmin < theta:
                    ties = np.flatnonzero(ratios <= rmin + 1e-12)
                    if bland:
                        r = int(ties[np.argmin(self.basis[ties])])
                    else:
                        r = int(ties[np.argmax(np.abs(alpha[ties]))])
                    theta = ratios[r]
                    leave = r
                    leave_to_upper = bool(inc[r])
            if not np.isfinite(theta):
                return "unbounded"
            self.iterations += 1
            if self.m:
                self.xB = self.xB - theta * alpha
            if leave < 0:
                # bound flip of the entering column
                self.at_upper[j] = not self.at_upper[j]
            else:
                entering_value = theta if direction > 0 else self.ub[j] - theta
                out = self.basis[leave]
                self._pivot(leave, j)
                self.xB[leave] = entering_value
                self.at_upper[out] = leave_to_upper
                self.at_upper[j] = False
            since_refactor += 1
            if since_refactor >= _REFACTOR_EVERY:
                self.refactor()
                since_refactor = 0
            if theta <= 1e-12:
                degenerate_run += 1
                if degenerate_run >= _DEGENERATE_RUN:
                    bland = True
            else:
                degenerate_run = 0
                bland = False

    def _batch_flips(self, gain):
        """Apply, in Dantzig order, every leading bound flip that needs no pivot.

        Flips leave the basis and hence the reduced costs unchanged, so a run
        of them is exactly what repeated single Dantzig steps would do.
        Returns the first column that needs a real ratio test, or -1.
        """
        cands = np.flatnonzero(gain > _OPT_TOL)
        if cands.size > _FLIP_BATCH:
            top = np.argpartition(-gain[cands], _FLIP_BATCH)[:_FLIP_BATCH]
            cands = np.sort(cands[top])
        cands = cands[np.argsort(-gain[cands], kind="stable")]
        ubc = self.ub[cands]
        stop = np.flatnonzero(~np.isfinite(ubc))
        K = int(stop[0]) if stop.size else cands.size
        if K == 0:
            return int(cands[0])
        step = np.where(self.at_upper[cands[:K]], -ubc[:K], ubc[:K])
        path = self.xB[:, None] - np.cumsum(self.T[:, cands[:K]] * step, axis=1)
        ubB = self.ub[self.basis][:, None]
        ok = np.all((path >= 0.0) & (path <= ubB), axis=0)
        bad = np.flatnonzero(~ok)
        f = int(bad[0]) if bad.size else K
        if f:
            flipped = cands[:f]
            self.at_upper[flipped] = ~self.at_upper[flipped]
            self.xB = path[:, f - 1].copy()
            self.iterations += f
        if f < cands.size:
            return int(cands[f])
        return -1

    def _pivot(self, r, j):
        T = self.T
        piv = T[r, j]
        T[r] = T[r] / piv
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        out = self.basis[r]
        self.is_basic[out] = False
        self.is_basic[j] = True
        self.basis[r] = j


def _solve_simplex(c, A, rel, b, lo, hi, maximize, start_upper=None, state_out=None) -> LPSolution:
    """Two-phase bounded simplex.

    ``start_upper`` (per internal column) overrides the initial nonbasic bound
    pattern; ``state_out`` (a dict) receives the final basis when given.
    """
    nv = c.shape[0]
    rel = np.asarray(rel, dtype=object)
    m = A.shape[0]

    # x = offset + T z with z >= 0
    cols = []  # (original var, sign)
    zub = []
    offset = np.zeros(nv)
    for j in range(nv):
        l, h = lo[j], hi[j]
        if np.isfinite(l):
            offset[j] = l
            cols.append((j, 1.0))
            zub.append(h - l)
        elif np.isfinite(h):
            offset[j] = h
            cols.append((j, -1.0))
            zub.append(np.inf)
        else:
            cols.append((j, 1.0))
            zub.append(np.inf)
            cols.append((j, -1.0))
            zub.append(np.inf)
    if np.any(np.asarray(zub) < 0):
        return LPSolution(Status.INFEASIBLE)
    nz = len(cols)
    Tmap = np.zeros((nv, nz))
    for k, (j, s) in enumerate(cols):
        Tmap[j, k] = s
    cz = c @ Tmap
    if maximize:
        cz = -cz

    Az = A @ Tmap
    rhs = b - A @ offset
    n_slack = int(np.sum(rel != EQ))
    M = np.zeros((m, nz + n_slack))
    M[:, :nz] = Az
    ub = list(zub) + [np.inf] * n_slack
    slack_col = np.full(m, -1)
    k = nz
    for i in range(m):
        if rel[i] == LE:
            M[i, k] = 1.0
            slack_col[i] = k
            k += 1
        elif rel[i] == GE:
            M[i, k] = -1.0
            slack_col[i] = k
            k += 1
    ub = np.asarray(ub, dtype=float)
    N0 = M.shape[1]
    cost2 = np.zeros(N0)
    cost2[:nz] = cz

    # start nonbasic columns at the bound favoured by the phase-2 objective
    at_upper = np.zeros(N0, dtype=bool)
    at_upper[:nz] = (cz < 0) & np.isfinite(ub[:nz])
    if start_upper is not None:
        at_upper[:nz] = np.asarray(start_upper, dtype=bool) & np.isfinite(ub[:nz])
    zN = np.where(at_upper, ub, 0.0)
    resid = rhs - M @ zN
    flip = resid < 0
    M[flip] *= -1
    resid[flip] *= -1
    rhs = np.where(flip, -rhs, rhs)

    basis = []
    art_rows = []
    for i in range(m):
        s = slack_col[i]
        if s >= 0 and M[i, s] > 0:
            basis.append(s)
        else:
            art_rows.append(i)
    n_art = len(art_rows)
    if n_art:
        Mart = np.zeros((m, n_art))
        for a, i in enumerate(art_rows):
            Mart[i, a] = 1.0
        M = np.hstack([M, Mart])
        ub = np.concatenate([ub, np.full(n_art, np.inf)])
        at_upper = np.concatenate([at_upper, np.zeros(n_art, dtype=bool)])
        cost2 = np.concatenate([cost2, np.zeros(n_art)])
        # artificials are basic in their rows; keep row order
        order = {}
        for i in range(m):
            s = slack_col[i]
            if s >= 0 and M[i, s] > 0:
                order[i] = s
        for a, i in enumerate(art_rows):
            order[i] = N0 + a
        basis = [order[i] for i in range(m)]
    N = M.shape[1]
    max_iter = 50 * (m + N) + 1000

    tab = _Tableau(M, rhs, ub, basis, at_upper)

    if n_art:
        cost1 = np.zeros(N)
        cost1[N0:] = 1.0
        tab.run(cost1, max_iter)
        infeas = float(np.sum(tab.values()[N0:]))
        if infeas > FEAS_TOL * max(1.0, float(np.max(np.abs(rhs))) if m else 1.0):
            return LPSolution(Status.INFEASIBLE, iterations=tab.iterations)
        # drive remaining artificials out of the basis
        for r in range(m):
            if tab.basis[r] >= N0:
                row = tab.T[r, :N0].copy()
                row[tab.is_basic[:N0]] = 0.0
                jj = np.flatnonzero(np.abs(row) > 1e-7)
                if jj.size:
                    j = int(jj[np.argmax(np.abs(row[jj]))])
                    value_j = tab.ub[j] if tab.at_upper[j] else 0.0
                    tab._pivot(r, j)
                    tab.xB[r] = value_j
                    tab.at_upper[j] = False
        ub = tab.ub
        ub[N0:] = 0.0  # artificials fixed at zero for phase 2
        tab.refactor()
        # drift is judged relative to the magnitudes in play; the final audit rechecks the point
        drift = 1e-7 * max(1.0, float(np.max(np.abs(tab.xB))), float(np.max(np.abs(rhs))))
        if np.any(tab.xB < -drift) or np.any(tab.xB > tab.ub[tab.basis] + drift):
            raise SolverError("simplex lost feasibility after phase 1")
        tab.xB = np.clip(tab.xB, 0.0, tab.ub[tab.basis])

    allowed = np.ones(N, dtype=bool)
    allowed[N0:] = False
    outcome = tab.run(cost2, max_iter, allowed)
    if outcome == "unbounded":
        return LPSolution(Status.UNBOUNDED, iterations=tab.iterations)
    if state_out is not None:
        state_out["basis"] = tab.basis.copy()
        state_out["at_upper"] = tab.at_upper[:N0].copy()
        state_out["n_cols"] = N0
    z = tab.values()[:nz]
    z = np.clip(z, 0.0, np.asarray(zub))
    x = offset + Tmap @ z
    value = float(c @ x)
    return LPSolution(Status.OPTIMAL, value, x, tab.iterations)


# --------------------------------------------------------------------------
# warm-startable homogeneous box LP
# --------------------------------------------------------------------------


@dataclass
class WarmState:
    """Basis and nonbasic bound pattern of a solved :func:`solve_homogeneous_box`."""

    basis: np.ndarray
    at_upper: np.ndarray


def solve_homogeneous_box(c, A, ub, warm: Optional[WarmState] = None, maximize: bool = True):
    """Optimize ``c @ x`` subject to ``A x = 0`` and ``0 <= x <= ub`` (finite ``ub``).

    ``x = 0`` is always feasible and the box keeps the problem bounded, so
    the answer is always optimal.  A ``warm`` state from a neighbouring
    problem is tried first; if its basis is singular or not primal feasible
    here the problem is solved from scratch.  Returns ``(LPSolution, WarmState)``.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    ub = np.broadcast_to(np.asarray(ub, dtype=float), c.shape).copy()
    # rows scaled to unit max-abs; the right-hand side is zero so this is free
    rmax = np.max(np.abs(A), axis=1) if A.size else np.zeros(A.shape[0])
    A = A[rmax > 0] / rmax[rmax > 0, None]
    m = A.shape[0]
    # columns too, x = scale * x_scaled: a column with tiny entries gets a tiny box instead of
    # sliding a full unit inside the pivot tolerance
    scale = np.ones(c.size)
    if m:
        cmax = np.max(np.abs(A), axis=0)
        scale[cmax > 0] = 1.0 / cmax[cmax > 0]
    A_unit = A
    A = A * scale
    c_unit, ub_unit = c, ub
    c, ub = c * scale, ub / scale
    cost = -c if maximize else c.copy()

    if warm is not None and m and warm.basis.shape[0] == m:
        B = A[:, warm.basis]
        if np.linalg.cond(B) < 1e10:
            tab = _Tableau(A, np.zeros(m), ub, warm.basis.copy(), warm.at_upper.copy())
            tol = 1e-9
            if np.all(tab.xB >= -tol) and np.all(tab.xB <= ub[tab.basis] + tol):
                tab.xB = np.clip(tab.xB, 0.0, ub[tab.basis])
                try:
                    tab.run(cost, 50 * (m + c.size) + 1000)
                    x = np.clip(tab.values() * scale, 0.0, ub_unit)
                    if np.max(np.abs(A_unit @ x), initial=0.0) <= FEAS_TOL:
                        return (
                            LPSolution(Status.OPTIMAL, float(c_unit @ x), x, tab.iterations),
                            WarmState(tab.basis.copy(), tab.at_upper.copy()),
                        )
                except SolverError:
                    pass

    start = None
    if warm is not None:
        start = warm.at_upper.copy()
        start[warm.basis[warm.basis < start.size]] = False
    out: dict = {}
    sol = _solve_simplex(c, A, [EQ] * m, np.zeros(m), np.zeros(c.size), ub, maximize, start, out)
    if not sol.optimal:
        raise SolverError(f"box LP reported {sol.status.value}")
    xs = np.clip(sol.x, 0.0, ub)
    x = np.clip(xs * scale, 0.0, ub_unit)
    if m and np.max(np.abs(A_unit @ x)) > FEAS_TOL:
        raise SolverError("box LP solution violates the equality rows")
    state = None
    if m and np.all(out["basis"] < out["n_cols"]):
        state = WarmState(out["basis"], out["at_upper"])
    elif m:
        state = _state_from_point(A, xs, ub)
    return LPSolution(Status.OPTIMAL, float(c_unit @ x), x, sol.iterations), state


def _state_from_point(A, x, ub) -> Optional[WarmState]:
    """A basis consistent with a vertex ``x``: fractional columns first, padded greedily."""
    m = A.shape[0]
    if m == 0:
        return None
    frac = np.flatnonzero((x > 1e-9) & (x < ub - 1e-9))
    chosen: list = []
    for j in list(frac) + list(np.argsort(np.minimum(x, ub - x))[::-1]):
        if j in chosen:
            continue
        trial = chosen + [int(j)]
        if np.linalg.matrix_rank(A[:, trial], tol=1e-9) == len(trial):
            chosen = trial
        if len(chosen) == m:
            break
    if len(chosen) < m:
        return None
    at_upper = x >= ub / 2
    at_upper[chosen] = False
    return WarmState(np.array(chosen), at_upper)
