# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the hot training loops in ``_pykernels``.

Same math, same signatures; keep both files in sync.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, tanh

BACKEND = "compiled"


def mlp_train(X, y, w1, b1, w2, b2, double lr, int epochs):
    """Full-batch gradient descent for the 1-hidden-layer tanh MLP (see
    the pure-python version for the contract)."""
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef double[:, ::1] w1v = w1
    cdef double[::1] b1v = b1
    cdef double[::1] w2v = w2
    cdef int n = Xv.shape[0]
    cdef int d = Xv.shape[1]
    cdef int nh = w1v.shape[1]
    cdef double bias2 = b2

    cdef cnp.ndarray[double, ndim=2] Hbuf = np.empty((n, nh))
    cdef cnp.ndarray[double, ndim=2] gw1buf = np.empty((d, nh))
    cdef cnp.ndarray[double, ndim=1] gw2buf = np.empty(nh)
    cdef cnp.ndarray[double, ndim=1] gb1buf = np.empty(nh)
    cdef double[:, ::1] H = Hbuf
    cdef double[:, ::1] gw1 = gw1buf
    cdef double[::1] gw2 = gw2buf
    cdef double[::1] gb1 = gb1buf

    cdef int e, i, j, k
    cdef double acc, pred, r, gb2, dh

    for e in range(epochs):
        gb2 = 0.0
        for k in range(nh):
            gw2[k] = 0.0
            gb1[k] = 0.0
        for j in range(d):
            for k in range(nh):
                gw1[j, k] = 0.0
        for i in range(n):
            pred = bias2
            for k in range(nh):
                acc = b1v[k]
                for j in range(d):
                    acc += Xv[i, j] * w1v[j, k]
                acc = tanh(acc)
                H[i, k] = acc
                pred += acc * w2v[k]
            r = 2.0 * (pred - yv[i]) / n
            gb2 += r
            for k in range(nh):
                gw2[k] += H[i, k] * r
                dh = r * w2v[k] * (1.0 - H[i, k] * H[i, k])
                gb1[k] += dh
                for j in range(d):
                    gw1[j, k] += Xv[i, j] * dh
        for k in range(nh):
            w2v[k] -= lr * gw2[k]
            b1v[k] -= lr * gb1[k]
            for j in range(d):
                w1v[j, k] -= lr * gw1[j, k]
        bias2 -= lr * gb2
    return bias2


def svr_smo(K, y, double C, double eps, double tol, int max_iter):
    """Pairwise coordinate descent on the epsilon-SVR dual (see the
    pure-python version for the algorithm description)."""
    cdef double[:, ::1] Kv = np.ascontiguousarray(K, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef int n = yv.shape[0]
    cdef cnp.ndarray[double, ndim=1] beta_arr = np.zeros(n)
    cdef cnp.ndarray[double, ndim=1] grad_arr = -np.asarray(y, dtype=np.float64)
    cdef double[::1] beta = beta_arr
    cdef double[::1] grad = grad_arr

    cdef int updates = 0, i, j, k
    cdef double biggest, t

    while updates < max_iter:
        biggest = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                t = _best_pair_step(Kv, grad, beta, i, j, C, eps)
                if t != 0.0:
                    beta[i] += t
                    beta[j] -= t
                    for k in range(n):
                        grad[k] += t * (Kv[k, i] - Kv[k, j])
                    updates += 1
                    if fabs(t) > biggest:
                        biggest = fabs(t)
                    if updates >= max_iter:
                        break
            if updates >= max_iter:
                break
        if biggest < tol:
            break

    # bias from free support vectors; fall back to the mean residual
    cdef double margin = 1e-8 * C
    cdef double acc = 0.0
    cdef int nfree = 0
    for i in range(n):
        if fabs(beta[i]) > margin and fabs(beta[i]) < C - margin:
            acc += -grad[i] - (eps if beta[i] > 0 else -eps)
            nfree += 1
    if nfree == 0:
        for i in range(n):
            acc += -grad[i]
        nfree = n
    return beta_arr, acc / nfree


cdef inline double _phi(double eta, double g, double eps,
                        double bi, double bj, double t):
    return (0.5 * eta * t * t + g * t
            + eps * (fabs(bi + t) - fabs(bi))
            + eps * (fabs(bj - t) - fabs(bj)))


cdef double _best_pair_step(double[:, ::1] K, double[::1] grad,
                            double[::1] beta, int i, int j,
                            double C, double eps):
    cdef double eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
    if eta <= 1e-12:
        return 0.0
    cdef double bi = beta[i]
    cdef double bj = beta[j]
    cdef double g = grad[i] - grad[j]
    cdef double lo = -C - bi
    if bj - C > lo:
        lo = bj - C
    cdef double hi = C - bi
    if bj + C < hi:
        hi = bj + C
    if hi <= lo:
        return 0.0

    cdef double cand[8]
    cdef int ncand = 0
    cand[ncand] = lo; ncand += 1
    cand[ncand] = hi; ncand += 1
    if lo < -bi < hi:
        cand[ncand] = -bi; ncand += 1
    if lo < bj < hi:
        cand[ncand] = bj; ncand += 1
    cdef double si, sj, t
    for si in (-1.0, 1.0):
        for sj in (-1.0, 1.0):
            t = -(g + eps * si - eps * sj) / eta
            if t < lo:
                t = lo
            elif t > hi:
                t = hi
            cand[ncand] = t; ncand += 1

    cdef double best_t = 0.0
    cdef double best_val = 0.0
    cdef double val
    cdef int c
    for c in range(ncand):
        val = _phi(eta, g, eps, bi, bj, cand[c])
        if val < best_val - 1e-14:
            best_t = cand[c]
            best_val = val
    return best_t
