"""Dense (weighted) least-squares primitives shared by every bound algorithm.

Conventions
-----------
``X`` is ``n x d`` with column 0 the treatment; ``X[:, 1:]`` are the controls
(written ``Xc`` below).  A control-coefficient vector ``lam`` has length
``d - 1`` and residuals are always ``Xc @ lam - y`` (fit minus response, with
the treatment coefficient pinned to zero).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

PINV_RCOND = 1e-10


@dataclass(frozen=True)
class Dataset:
    """Covariates ``X`` (n x d, treatment first) and responses ``y`` (n)."""

    X: np.ndarray
    y: np.ndarray
    column_names: Optional[Sequence[str]] = field(default=None, compare=False)

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        y = np.array(self.y, dtype=float).reshape(-1)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2:
            raise ValueError("X must be a 2-d array")
        n, d = X.shape
        if n < 1 or d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got X of shape {X.shape}")
        if y.shape[0] != n:
            raise ValueError(f"y has length {y.shape[0]}, expected {n}")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ValueError("X and y must be finite")
        if self.column_names is not None and len(self.column_names) != d:
            raise ValueError("column_names must have one entry per column of X")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def controls(self) -> np.ndarray:
        """The control block ``X[:, 1:]`` (n x (d-1), possibly zero columns)."""
        return self.X[:, 1:]

    def subset(self, rows) -> "Dataset":
        rows = np.asarray(rows)
        return Dataset(self.X[rows], self.y[rows], self.column_names)

    def tol_normal(self) -> float:
        """Scale-aware tolerance for normal-equation residuals."""
        return 1e-7 * (1.0 + np.linalg.norm(self.X) * np.linalg.norm(self.y))


def _as_weights(ds: Dataset, w) -> np.ndarray:
    if w is None:
        return np.ones(ds.n)
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.shape[0] != ds.n:
        raise ValueError(f"weight vector has length {w.shape[0]}, expected {ds.n}")
    return w


def weighted_ols(ds: Dataset, w=None) -> np.ndarray:
    """Minimum-norm solution of ``X^T (w * (X beta - y)) = 0``.

    The weighted Gram matrix is inverted through an SVD pseudoinverse with
    singular values below ``1e-10 * sigma_max`` discarded, so vanishing
    weights (and outright singular designs) are handled without special
    cases.
    """
    w = _as_weights(ds, w)
    Xw = ds.X * w[:, None]
    gram = ds.X.T @ Xw
    rhs = Xw.T @ ds.y
    return np.linalg.pinv(gram, rcond=PINV_RCOND, hermitian=True) @ rhs


def residuals(ds: Dataset, lam) -> np.ndarray:
    """``Xc @ lam - y`` for control coefficients ``lam`` (length ``d - 1``)."""
    lam = np.asarray(lam, dtype=float).reshape(-1)
    if lam.shape[0] != ds.d - 1:
        raise ValueError(f"lam has length {lam.shape[0]}, expected {ds.d - 1}")
    return ds.controls @ lam - ds.y


def normal_residual(ds: Dataset, beta, w=None) -> np.ndarray:
    """``X^T (w * (X beta - y))``; zero exactly when beta is a weight-w OLS solution."""
    w = _as_weights(ds, w)
    beta = np.asarray(beta, dtype=float).reshape(-1)
    return ds.X.T @ (w * (ds.X @ beta - ds.y))


def is_zero_treatment_solution(ds: Dataset, lam, w=None, tol: float | None = None) -> bool:
    """Whether ``(0, lam)`` solves the weight-w normal equations to ``tol``."""
    tol = ds.tol_normal() if tol is None else tol
    beta = np.concatenate([[0.0], np.asarray(lam, dtype=float).reshape(-1)])
    return bool(np.max(np.abs(normal_residual(ds, beta, w))) <= tol)


def ols_error_norm(ds: Dataset) -> float:
    """``||X beta0 - y||_2`` for the unweighted minimum-norm OLS fit ``beta0``."""
    beta0 = weighted_ols(ds)
    return float(np.linalg.norm(ds.X @ beta0 - ds.y))


def zero_treatment_fit(ds: Dataset):
    """Solve ``X^T (Xc lam - y) = 0`` for ``lam`` if it is solvable.

    Returns the minimum-norm ``lam`` when the system is consistent to
    ``tol_normal`` and ``None`` otherwise.  A solution means the unweighted
    OLS set already contains a regressor with zero treatment coefficient.
    """
    if ds.d == 1:
        lam = np.zeros(0)
    else:
        lhs = ds.X.T @ ds.controls
        lam = np.linalg.lstsq(lhs, ds.X.T @ ds.y, rcond=None)[0]
    if is_zero_treatment_solution(ds, lam):
        return lam
    return None


def treatment_coefficient(ds: Dataset, w=None) -> float:
    return float(weighted_ols(ds, w)[0])
