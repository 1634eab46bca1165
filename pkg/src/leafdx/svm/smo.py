"""Soft-margin binary SVM trained by sequential minimal optimisation.

The dual  min 0.5 a'Qa - e'a  s.t. 0 <= a <= C, y'a = 0  (Q_ij = y_i y_j K_ij)
is solved by repeatedly optimising the maximal violating pair until the KKT
gap falls below the tolerance.  The kernel matrix is held whole when it fits
the cache budget, otherwise rows are recomputed on demand.
"""
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from ..errors import TrainingStalledError
from .kernel import rbf_matrix

DEFAULT_TOL = 1e-3
MAX_PAIR_UPDATES = 10**6
KERNEL_CACHE_BYTES = 64 * 1024 * 1024
SV_EPS = 1e-12  # multipliers at or below this are not support vectors


@dataclass(frozen=True)
class BinarySvm:
    support_vectors: np.ndarray  # (n_sv, d)
    dual_coefs: np.ndarray  # alpha_i * y_i per support vector
    bias: float
    gamma: float
    C: float

    def __post_init__(self):
        sv = np.asarray(self.support_vectors, dtype=np.float64)
        dc = np.asarray(self.dual_coefs, dtype=np.float64)
        if sv.ndim != 2 or dc.shape != (sv.shape[0],):
            raise ValueError("support vectors and dual coefficients disagree")
        if self.gamma <= 0 or self.C <= 0:
            raise ValueError("gamma and C must be positive")
        for name, arr in (("support_vectors", sv), ("dual_coefs", dc)):
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def decision(self, X: np.ndarray) -> np.ndarray:
        """Signed distance-like score; positive favours the +1 class."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if len(self.dual_coefs) == 0:
            return np.full(len(X), self.bias)
        return rbf_matrix(X, self.support_vectors, self.gamma) @ self.dual_coefs + self.bias


class _KernelRows:
    """Row access to the Gram matrix under a byte budget."""

    def __init__(self, X: np.ndarray, gamma: float):
        self.X = X
        self.gamma = gamma
        n = len(X)
        if n * n * 8 <= KERNEL_CACHE_BYTES:
            self.full = rbf_matrix(X, X, gamma)
            self.cache = None
        else:
            self.full = None
            self.cache: OrderedDict[int, np.ndarray] = OrderedDict()
            self.max_rows = max(2, KERNEL_CACHE_BYTES // (n * 8))

    def row(self, i: int) -> np.ndarray:
        if self.full is not None:
            return self.full[i]
        got = self.cache.get(i)
        if got is None:
            got = rbf_matrix(self.X[i : i + 1], self.X, self.gamma)[0]
            self.cache[i] = got
            if len(self.cache) > self.max_rows:
                self.cache.popitem(last=False)
        else:
            self.cache.move_to_end(i)
        return got

    def diag(self) -> np.ndarray:
        if self.full is not None:
            return np.diag(self.full).copy()
        return np.ones(len(self.X))  # RBF: K(x, x) = 1


def smo_train(
    X: np.ndarray,
    y: np.ndarray,
    C: float,
    gamma: float,
    tol: float = DEFAULT_TOL,
    max_pair_updates: int = MAX_PAIR_UPDATES,
) -> BinarySvm:
    """Train on labels in {-1, +1}; raises on single-class input and on
    hitting the update cap before convergence."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("X must be (n, d) with matching labels")
    if not (np.all((y == 1) | (y == -1))):
        raise ValueError("labels must be -1 or +1")
    if len(np.unique(y)) < 2:
        raise ValueError("both classes must be present")
    if C <= 0 or gamma <= 0:
        raise ValueError("C and gamma must be positive")

    n = len(y)
    kern = _KernelRows(X, gamma)
    diag = kern.diag()
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of the dual objective at alpha = 0

    pos = y > 0
    for _ in range(max_pair_updates):
        neg_yg = -y * grad
        up = (pos & (alpha < C - SV_EPS)) | (~pos & (alpha > SV_EPS))
        low = (pos & (alpha > SV_EPS)) | (~pos & (alpha < C - SV_EPS))
        if not up.any() or not low.any():
            break
        i = int(np.argmax(np.where(up, neg_yg, -np.inf)))
        j = int(np.argmin(np.where(low, neg_yg, np.inf)))
        if neg_yg[i] - neg_yg[j] < tol:
            break

        Ki = kern.row(i)
        Kj = kern.row(j)
        eta = max(diag[i] + diag[j] - 2.0 * Ki[j], 1e-12)
        ai_old, aj_old = alpha[i], alpha[j]
        if y[i] != y[j]:
            delta = (-grad[i] - grad[j]) / eta
            diff = ai_old - aj_old
            ai, aj = ai_old + delta, aj_old + delta
            if diff > 0:
                if aj < 0:
                    aj, ai = 0.0, diff
            else:
                if ai < 0:
                    ai, aj = 0.0, -diff
            if diff > 0:
                if ai > C:
                    ai, aj = C, C - diff
            else:
                if aj > C:
                    aj, ai = C, C + diff
        else:
            delta = (grad[i] - grad[j]) / eta
            total = ai_old + aj_old
            ai, aj = ai_old - delta, aj_old + delta
            if total > C:
                if ai > C:
                    ai, aj = C, total - C
            else:
                if aj < 0:
                    aj, ai = 0.0, total
            if total > C:
                if aj > C:
                    aj, ai = C, total - C
            else:
                if ai < 0:
                    ai, aj = 0.0, total
        alpha[i], alpha[j] = ai, aj
        # grad = Q alpha - e;  Q rows = y_i y_j K_ij
        grad += (y * y[i] * Ki) * (ai - ai_old) + (y * y[j] * Kj) * (aj - aj_old)
    else:
        raise TrainingStalledError(f"no convergence within {max_pair_updates} pair updates")

    bias = _compute_bias(y, alpha, grad, C)
    keep = alpha > SV_EPS
    return BinarySvm(
        support_vectors=X[keep],
        dual_coefs=alpha[keep] * y[keep],
        bias=bias,
        gamma=gamma,
        C=C,
    )


def _compute_bias(y: np.ndarray, alpha: np.ndarray, grad: np.ndarray, C: float) -> float:
    """Average of -y*grad over free vectors; midpoint of the KKT interval
    when nothing sits strictly inside the box."""
    neg_yg = -y * grad
    free = (alpha > SV_EPS) & (alpha < C - SV_EPS)
    if free.any():
        return float(neg_yg[free].mean())
    lower = ((y > 0) & (alpha <= SV_EPS)) | ((y < 0) & (alpha >= C - SV_EPS))
    upper = ((y > 0) & (alpha >= C - SV_EPS)) | ((y < 0) & (alpha <= SV_EPS))
    lo = neg_yg[lower].max() if lower.any() else -np.inf
    hi = neg_yg[upper].min() if upper.any() else np.inf
    if np.isfinite(lo) and np.isfinite(hi):
        return float((lo + hi) / 2.0)
    return float(lo if np.isfinite(lo) else (hi if np.isfinite(hi) else 0.0))
