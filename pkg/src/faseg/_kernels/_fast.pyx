# cython: boundscheck=False, wraparound=False, cdivision=True
"""Cython kernels matching faseg._kernels.pure bit-for-bit in semantics."""

from libc.math cimport exp, log

import numpy as np


cdef inline double _lse_row(double[::1] row) nogil:
    cdef Py_ssize_t k, n = row.shape[0]
    cdef double m = row[0]
    cdef double s = 0.0
    for k in range(1, n):
        if row[k] > m:
            m = row[k]
    for k in range(n):
        s += exp(row[k] - m)
    return m + log(s)


def forward_backward(double[:, ::1] scores, double[:, ::1] trans):
    """Return (logZ, node_marginals (T,K), edge_marginal_sums (K,K))."""
    cdef Py_ssize_t T = scores.shape[0]
    cdef Py_ssize_t K = scores.shape[1]
    alpha_arr = np.empty((T, K), dtype=np.float64)
    beta_arr = np.empty((T, K), dtype=np.float64)
    node_arr = np.empty((T, K), dtype=np.float64)
    edge_arr = np.zeros((K, K), dtype=np.float64)
    work_arr = np.empty(K, dtype=np.float64)
    cdef double[:, ::1] alpha = alpha_arr
    cdef double[:, ::1] beta = beta_arr
    cdef double[:, ::1] node = node_arr
    cdef double[:, ::1] edge = edge_arr
    cdef double[::1] work = work_arr
    cdef Py_ssize_t t, y, x
    cdef double log_z, m, s

    for y in range(K):
        alpha[0, y] = scores[0, y]
    for t in range(1, T):
        for y in range(K):
            for x in range(K):
                work[x] = alpha[t - 1, x] + trans[x, y]
            alpha[t, y] = scores[t, y] + _lse_row(work)
    for y in range(K):
        work[y] = alpha[T - 1, y]
    log_z = _lse_row(work)

    for y in range(K):
        beta[T - 1, y] = 0.0
    for t in range(T - 2, -1, -1):
        for y in range(K):
            for x in range(K):
                work[x] = trans[y, x] + scores[t + 1, x] + beta[t + 1, x]
            beta[t, y] = _lse_row(work)

    for t in range(T):
        for y in range(K):
            node[t, y] = exp(alpha[t, y] + beta[t, y] - log_z)
    for t in range(T - 1):
        for y in range(K):
            for x in range(K):
                edge[y, x] += exp(
                    alpha[t, y] + trans[y, x] + scores[t + 1, x]
                    + beta[t + 1, x] - log_z
                )
    return log_z, node_arr, edge_arr


def viterbi(double[:, ::1] scores, double[:, ::1] trans):
    """Best path; ties break toward the lowest label index."""
    cdef Py_ssize_t T = scores.shape[0]
    cdef Py_ssize_t K = scores.shape[1]
    delta_arr = np.empty(K, dtype=np.float64)
    next_arr = np.empty(K, dtype=np.float64)
    back_arr = np.zeros((T, K), dtype=np.int64)
    path_arr = np.empty(T, dtype=np.int64)
    cdef double[::1] delta = delta_arr
    cdef double[::1] nxt = next_arr
    cdef long long[:, ::1] back = back_arr
    cdef long long[::1] path = path_arr
    cdef Py_ssize_t t, y, x, best
    cdef double cand, best_val

    for y in range(K):
        delta[y] = scores[0, y]
    for t in range(1, T):
        for y in range(K):
            best = 0
            best_val = delta[0] + trans[0, y]
            for x in range(1, K):
                cand = delta[x] + trans[x, y]
                if cand > best_val:
                    best_val = cand
                    best = x
            nxt[y] = scores[t, y] + best_val
            back[t, y] = best
        for y in range(K):
            delta[y] = nxt[y]

    best = 0
    best_val = delta[0]
    for y in range(1, K):
        if delta[y] > best_val:
            best_val = delta[y]
            best = y
    path[T - 1] = best
    for t in range(T - 1, 0, -1):
        path[t - 1] = back[t, path[t]]
    return path_arr


def emission_scores(double[:, ::1] state_weights, int[::1] ids, int[::1] offsets):
    """Sum weight rows of the active features per position."""
    cdef Py_ssize_t T = offsets.shape[0] - 1
    cdef Py_ssize_t K = state_weights.shape[1]
    out_arr = np.zeros((T, K), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t t, j, k
    cdef int f
    for t in range(T):
        for j in range(offsets[t], offsets[t + 1]):
            f = ids[j]
            for k in range(K):
                out[t, k] += state_weights[f, k]
    return out_arr


def emission_grad(
    int[::1] ids,
    int[::1] offsets,
    double[:, ::1] residuals,
    double[:, ::1] grad_out,
):
    """Scatter-add each position's residual row into its active features."""
    cdef Py_ssize_t T = offsets.shape[0] - 1
    cdef Py_ssize_t K = grad_out.shape[1]
    cdef Py_ssize_t t, j, k
    cdef int f
    for t in range(T):
        for j in range(offsets[t], offsets[t + 1]):
            f = ids[j]
            for k in range(K):
                grad_out[f, k] += residuals[t, k]
