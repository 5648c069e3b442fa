"""Pure-numpy kernels: forward-backward, Viterbi, emission gather/scatter.

Reference implementation; the Cython module in ``_fast.pyx`` computes the
same quantities. Scores are (T, K) emission matrices in log space, ``trans``
is the (K, K) transition matrix indexed (from, to).
"""

from __future__ import annotations

import numpy as np


def _logsumexp(a: np.ndarray, axis: int) -> np.ndarray:
    m = a.max(axis=axis)
    return m + np.log(np.sum(np.exp(a - np.expand_dims(m, axis)), axis=axis))


def forward_backward(scores: np.ndarray, trans: np.ndarray):
    """Return (logZ, node_marginals (T,K), edge_marginal_sums (K,K))."""
    T, K = scores.shape
    alpha = np.empty((T, K))
    beta = np.empty((T, K))
    alpha[0] = scores[0]
    for t in range(1, T):
        alpha[t] = scores[t] + _logsumexp(alpha[t - 1][:, None] + trans, 0)
    log_z = float(_logsumexp(alpha[-1], 0))
    beta[-1] = 0.0
    for t in range(T - 2, -1, -1):
        beta[t] = _logsumexp(trans + (scores[t + 1] + beta[t + 1])[None, :], 1)
    node = np.exp(alpha + beta - log_z)
    edge = np.zeros((K, K))
    for t in range(T - 1):
        edge += np.exp(
            alpha[t][:, None] + trans + (scores[t + 1] + beta[t + 1])[None, :] - log_z
        )
    return log_z, node, edge


def viterbi(scores: np.ndarray, trans: np.ndarray) -> np.ndarray:
    """Best path; ties break toward the lowest label index."""
    T, K = scores.shape
    delta = scores[0].astype(np.float64, copy=True)
    back = np.zeros((T, K), dtype=np.int64)
    for t in range(1, T):
        cand = delta[:, None] + trans
        best_from = np.argmax(cand, axis=0)  # first max = lowest index
        delta = scores[t] + cand[best_from, np.arange(K)]
        back[t] = best_from
    path = np.empty(T, dtype=np.int64)
    path[-1] = int(np.argmax(delta))
    for t in range(T - 1, 0, -1):
        path[t - 1] = back[t, path[t]]
    return path


def emission_scores(
    state_weights: np.ndarray, ids: np.ndarray, offsets: np.ndarray
) -> np.ndarray:
    """Sum weight rows of the active features per position.

    ``ids`` holds the active feature ids of all positions concatenated and
    ``offsets`` (length T+1) delimits each position's slice.
    """
    T = len(offsets) - 1
    K = state_weights.shape[1]
    if len(ids) == 0:
        return np.zeros((T, K))
    out = np.add.reduceat(state_weights[ids], offsets[:-1], axis=0)
    counts = np.diff(offsets)
    out[counts == 0] = 0.0  # reduceat misreads empty slices
    return out


def emission_grad(
    ids: np.ndarray,
    offsets: np.ndarray,
    residuals: np.ndarray,
    grad_out: np.ndarray,
) -> None:
    """Scatter-add each position's residual row into its active features."""
    if len(ids) == 0:
        return
    counts = np.diff(offsets)
    np.add.at(grad_out, ids, np.repeat(residuals, counts, axis=0))
