"""Net-based upper bound on the fractional stability.

For fixed control coefficients ``lam`` the largest retained weight

    V(lam) = max { sum(w) : w in [0, 1]^n,  X^T (w * (Xc lam - y)) = 0 }

is a linear program, and ``n - V(lam)`` upper-bounds the stability for every
``lam``.  The bound is tightened by maximizing ``V`` over a random net of
candidate ``lam`` whose residual vectors ``Xc lam - y`` point in uniformly
random directions of the column space of ``[Xc, -y]``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import lp
from .bounds import UPPER, StabilityBound
from .ols import Dataset, residuals, zero_treatment_fit

DEG_TOL = 1e-12
RANK_TOL = 1e-12


@dataclass(frozen=True)
class NetConfig:
    num_directions: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.num_directions < 0:
            raise ValueError("num_directions must be non-negative")


@dataclass
class LambdaCandidate:
    lam: np.ndarray
    V: float
    w: np.ndarray


@dataclass
class ResidualNet:
    """Net points plus the data needed to audit them.

    ``directions[k]`` is the unit vector ``m`` (in the SVD frame of
    ``[Xc, -y']``) that generated ``lambdas[k]``; ``U`` is the left singular
    basis, so ``Xc lambdas[k] - y`` is parallel to ``U @ directions[k]``
    (up to sign).  ``shift`` records a perturbation ``y' = y + c * Xc[:, j]``
    applied when ``y`` alone is degenerate; it is already undone in
    ``lambdas``.
    """

    lambdas: np.ndarray
    directions: np.ndarray
    U: np.ndarray
    shift: Optional[tuple] = None


def stability_at_lambda(ds: Dataset, lam, method: Optional[str] = None) -> LambdaCandidate:
    """Solve the weight LP ``V(lam)``."""
    lam = np.asarray(lam, dtype=float).reshape(-1)
    r = residuals(ds, lam)
    A = (ds.X * r[:, None]).T
    prob = lp.LPProblem(np.ones(ds.n), A, [lp.EQ] * ds.d, np.zeros(ds.d), 0.0, 1.0, maximize=True)
    sol = lp.solve(prob, method)
    if not sol.optimal:
        # w = 0 is always feasible and the objective is bounded by n
        raise lp.SolverError(f"weight LP reported {sol.status.value}")
    w = np.clip(sol.x, 0.0, 1.0)
    return LambdaCandidate(lam, float(w.sum()), w)


def _canonical_basis(A: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ``col(A)`` from QR with a positive ``R`` diagonal.

    Unlike SVD factors this basis is unchanged when a column of ``A`` is
    rescaled by a positive factor or the rows of ``A`` are permuted (the
    basis rows permute along), which makes the net reproducible under those
    transformations.
    """
    Q, R = np.linalg.qr(A)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def _svd_frame(A: np.ndarray):
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return U[:, :0], s[:0], Vt[:0]
    rank = int(np.sum(s > RANK_TOL * s[0]))
    return U[:, :rank], s[:rank], Vt[:rank]


def residual_net(ds: Dataset, cfg: NetConfig) -> ResidualNet:
    rng = np.random.default_rng(cfg.seed)
    Xc = ds.controls
    y = ds.y
    shift = None
    for attempt in range(2):
        A = np.column_stack([Xc, -y])
        U, s, Vt = _svd_frame(A)
        B = Vt.T / s  # d x rank
        if B.size and np.max(np.abs(B[-1])) > RANK_TOL * np.max(np.abs(B)):
            break
        if attempt == 1:
            raise ValueError("residual space is degenerate even after perturbing the response")
        nonzero = np.flatnonzero(np.linalg.norm(Xc, axis=0) > 0) if ds.d > 1 else []
        if len(nonzero) == 0:
            raise ValueError("response is zero and there is no nonzero control to perturb it with")
        j = int(nonzero[0])
        c = float(rng.uniform(0.5, 1.5)) * (1.0 + np.linalg.norm(y)) / np.linalg.norm(Xc[:, j])
        y = y + c * Xc[:, j]
        shift = (j, c)
    rank = s.shape[0]

    if rank == ds.d:
        W = U.T @ _canonical_basis(A)
    else:
        W = np.eye(rank)

    raw = rng.standard_normal((cfg.num_directions, rank))
    raw /= np.linalg.norm(raw, axis=1, keepdims=True)
    m = raw @ W.T
    Bm = m @ B.T  # (num_directions, d)
    last = Bm[:, -1]
    keep = np.abs(last) > DEG_TOL * np.linalg.norm(Bm, axis=1)
    lambdas = Bm[keep, :-1] / last[keep, None]
    m = m[keep]
    if shift is not None:
        j, c = shift
        lambdas[:, j] -= c
    if ds.d == 1 and lambdas.shape[0] > 1:
        lambdas, m = lambdas[:1], m[:1]
    return ResidualNet(lambdas, m, U, shift)


def build_residual_net(ds: Dataset, cfg: NetConfig) -> List[np.ndarray]:
    """Candidate control coefficients of the residual net (list of arrays)."""
    return list(residual_net(ds, cfg).lambdas)


def _chain_order(directions: np.ndarray) -> np.ndarray:
    """Visit order in which consecutive directions are close (greedy nearest neighbour).

    ``m`` and ``-m`` give the same weight LP, so distance ignores sign.
    """
    k = directions.shape[0]
    if k <= 2:
        return np.arange(k)
    order = [0]
    left = np.ones(k, dtype=bool)
    left[0] = False
    for _ in range(k - 1):
        sim = np.abs(directions @ directions[order[-1]])
        sim[~left] = -np.inf
        j = int(np.argmax(sim))
        order.append(j)
        left[j] = False
    return np.array(order)


def _evaluate_chain(ds: Dataset, lambdas, order, method):
    """``V`` for each lambda, visiting ``order`` and warm-starting along it."""
    V = np.empty(len(lambdas))
    use_warm = method in (None, "auto", "simplex")
    state = None
    for idx in order:
        lam = lambdas[idx]
        if use_warm:
            r = residuals(ds, lam)
            sol, state = lp.solve_homogeneous_box(np.ones(ds.n), (ds.X * r[:, None]).T, 1.0, state)
            V[idx] = float(np.clip(sol.x, 0.0, 1.0).sum())
        else:
            V[idx] = stability_at_lambda(ds, lam, method).V
    return V


def evaluate_net(ds: Dataset, net: ResidualNet, method: Optional[str] = None, n_jobs: int = 1) -> np.ndarray:
    """``V(lam)`` for every net point (values do not depend on visit order)."""
    k = net.lambdas.shape[0]
    if k == 0:
        return np.zeros(0)
    order = _chain_order(net.directions)
    if n_jobs > 1 and k > 1:
        chunks = np.array_split(order, min(n_jobs, k))
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(lambda ch: _evaluate_chain(ds, net.lambdas, ch, method), chunks))
        V = np.empty(k)
        for ch, part in zip(chunks, parts):
            V[ch] = part[ch]
        return V
    return _evaluate_chain(ds, net.lambdas, order, method)


def net_upper_bound(
    ds: Dataset, cfg: NetConfig = NetConfig(), method: Optional[str] = None, n_jobs: int = 1
) -> StabilityBound:
    """``n - max V(lam)`` over the residual net; always an upper bound."""
    lam0 = zero_treatment_fit(ds)
    if lam0 is not None:
        return StabilityBound(
            0.0, UPPER, "net", {"lambda": lam0, "w": np.ones(ds.n), "V": float(ds.n), "exact_fit": True}
        )
    net = residual_net(ds, cfg)
    if net.lambdas.shape[0] == 0:
        return StabilityBound(
            float(ds.n), UPPER, "net", {"lambda": np.zeros(ds.d - 1), "w": np.zeros(ds.n), "V": 0.0, "num_evaluated": 0}
        )
    V = evaluate_net(ds, net, method, n_jobs)
    # first net point within float noise of the best; its certificate is re-solved from scratch
    top = int(np.flatnonzero(V >= V.max() - 1e-9 * (1.0 + ds.n))[0])
    best = stability_at_lambda(ds, net.lambdas[top], method)
    return StabilityBound(
        max(0.0, ds.n - best.V),
        UPPER,
        "net",
        {"lambda": best.lam, "w": best.w, "V": best.V, "num_evaluated": int(V.shape[0]), "index": top},
    )
