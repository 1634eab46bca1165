"""Sigmoid calibration of decision values: P(y=+1 | f) = 1/(1 + exp(A f + B)).

Regularised maximum likelihood with prior-smoothed targets, solved by a
damped Newton iteration with backtracking line search.
"""
from __future__ import annotations

import numpy as np

MAX_NEWTON_ITERS = 100
GRAD_TOL = 1e-10
MIN_STEP = 1e-10
HESSIAN_RIDGE = 1e-12


def platt_fit(decision_values: np.ndarray, labels: np.ndarray) -> tuple[float, float]:
    """Fit (A, B); labels are +-1.  All-identical decision values fall back
    to A = 0 with B reproducing the smoothed class prior."""
    f = np.asarray(decision_values, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if f.shape != y.shape or f.ndim != 1:
        raise ValueError("decision values and labels must be matching vectors")
    if not np.all((y == 1) | (y == -1)):
        raise ValueError("labels must be -1 or +1")
    prior1 = int((y > 0).sum())
    prior0 = int((y < 0).sum())
    if prior1 == 0 or prior0 == 0:
        raise ValueError("both labels must be present")

    prior_b = float(np.log((prior0 + 1.0) / (prior1 + 1.0)))
    if np.ptp(f) == 0.0:
        return 0.0, prior_b

    hi = (prior1 + 1.0) / (prior1 + 2.0)
    lo = 1.0 / (prior0 + 2.0)
    t = np.where(y > 0, hi, lo)

    def nll(A, B):
        z = A * f + B
        # log(1 + e^-|z|) + max(z, 0) is the stable softplus of z
        return float(np.sum(t * z + np.log1p(np.exp(-np.abs(z))) + np.maximum(-z, 0.0)))

    A, B = 0.0, prior_b
    fval = nll(A, B)
    for _ in range(MAX_NEWTON_ITERS):
        z = A * f + B
        p = _stable_sigmoid_neg(z)
        q = 1.0 - p
        d2 = p * q
        h11 = float((f * f * d2).sum()) + HESSIAN_RIDGE
        h22 = float(d2.sum()) + HESSIAN_RIDGE
        h21 = float((f * d2).sum())
        d1 = t - p
        g1 = float((f * d1).sum())
        g2 = float(d1.sum())
        if abs(g1) < GRAD_TOL and abs(g2) < GRAD_TOL:
            break
        det = h11 * h22 - h21 * h21
        dA = -(h22 * g1 - h21 * g2) / det
        dB = -(-h21 * g1 + h11 * g2) / det
        gd = g1 * dA + g2 * dB
        step = 1.0
        while step >= MIN_STEP:
            cand = nll(A + step * dA, B + step * dB)
            if cand < fval + 1e-4 * step * gd:
                A, B = A + step * dA, B + step * dB
                fval = cand
                break
            step /= 2.0
        else:
            break  # line search failed: accept the current point
    return float(A), float(B)


def _stable_sigmoid_neg(z: np.ndarray) -> np.ndarray:
    """1 / (1 + exp(z)) without overflow on either tail."""
    out = np.empty_like(z)
    m = z >= 0
    ez = np.exp(-z[m])
    out[m] = ez / (1.0 + ez)
    out[~m] = 1.0 / (1.0 + np.exp(z[~m]))
    return out


def platt_predict(f: np.ndarray, A: float, B: float) -> np.ndarray:
    """P(y=+1 | decision value f), numerically stable."""
    z = A * np.asarray(f, dtype=np.float64) + B
    return _stable_sigmoid_neg(np.atleast_1d(z))
