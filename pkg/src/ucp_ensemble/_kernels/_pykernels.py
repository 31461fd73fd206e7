"""Pure-numpy implementations of the hot training loops.

These are the fallback for the compiled extension in ``_ckernels.pyx``; both
backends implement the same math and the package selects one at import time
(see ``__init__``).  Keep the two files in sync.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def mlp_train(X, y, w1, b1, w2, b2, lr, epochs):
    """Full-batch gradient descent on mean squared error for a 1-hidden-layer
    tanh network with linear output.

    X: (n, d) scaled inputs; y: (n,) standardized targets.  Parameters are
    updated in place for `epochs` steps; returns the final scalar output bias.
    """
    X = np.ascontiguousarray(X, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    n = X.shape[0]
    for _ in range(epochs):
        h = np.tanh(X @ w1 + b1)
        pred = h @ w2 + b2
        r = (2.0 / n) * (pred - y)
        gw2 = h.T @ r
        gb2 = float(np.sum(r))
        dh = np.outer(r, w2) * (1.0 - h * h)
        gw1 = X.T @ dh
        gb1 = dh.sum(axis=0)
        w1 -= lr * gw1
        b1 -= lr * gb1
        w2 -= lr * gw2
        b2 -= lr * gb2
    return b2


def svr_smo(K, y, C, eps, tol, max_iter):
    """Pairwise coordinate descent on the epsilon-SVR dual.

    Minimizes 0.5 b'Kb - y'b + eps*sum|b_i| over beta in [-C, C]^n subject to
    sum(beta) = 0 (beta_i = alpha_i - alpha_i*).  Each step optimizes one
    (beta_i + t, beta_j - t) pair exactly: the 1-D objective is piecewise
    quadratic with breakpoints where either coefficient crosses zero, so the
    minimum is found by evaluating each segment's stationary point plus the
    breakpoints and box corners.  Sweeps all pairs until the largest applied
    step falls below `tol` or `max_iter` updates are spent.

    Returns (beta, bias).
    """
    K = np.asarray(K, dtype=float)
    y = np.asarray(y, dtype=float)
    n = y.size
    beta = np.zeros(n)
    grad = -y.copy()  # smooth-part gradient: K beta - y
    updates = 0
    while updates < max_iter:
        biggest = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                t = _best_pair_step(K, grad, beta, i, j, C, eps)
                if t != 0.0:
                    beta[i] += t
                    beta[j] -= t
                    grad += t * (K[:, i] - K[:, j])
                    updates += 1
                    biggest = max(biggest, abs(t))
                    if updates >= max_iter:
                        break
            if updates >= max_iter:
                break
        if biggest < tol:
            break
    return beta, _bias(beta, grad, C, eps)


def _best_pair_step(K, grad, beta, i, j, C, eps):
    eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
    if eta <= 1e-12:
        return 0.0
    bi, bj = beta[i], beta[j]
    g = grad[i] - grad[j]
    lo = max(-C - bi, bj - C)
    hi = min(C - bi, bj + C)
    if hi <= lo:
        return 0.0

    def phi(t):
        return (0.5 * eta * t * t + g * t
                + eps * (abs(bi + t) - abs(bi))
                + eps * (abs(bj - t) - abs(bj)))

    candidates = [lo, hi]
    for brk in (-bi, bj):
        if lo < brk < hi:
            candidates.append(brk)
    for si in (-1.0, 1.0):
        for sj in (-1.0, 1.0):
            t = -(g + eps * si - eps * sj) / eta
            candidates.append(min(hi, max(lo, t)))
    best_t, best_val = 0.0, 0.0
    for t in candidates:
        val = phi(t)
        if val < best_val - 1e-14:
            best_t, best_val = t, val
    return best_t


def _bias(beta, grad, C, eps):
    # Free support vectors pin the bias exactly; average them for stability.
    margin = 1e-8 * C
    free = (np.abs(beta) > margin) & (np.abs(beta) < C - margin)
    if np.any(free):
        return float(np.mean(-grad[free] - eps * np.sign(beta[free])))
    return float(np.mean(-grad))
