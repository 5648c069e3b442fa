"""Dataset compilation and the regularized CRF objective.

Samples are compiled into flat feature-id arrays once; masked positions are
dropped from the chain entirely (no emission, transitions bridge over them),
so their gold tags can never influence the objective or the gradient.
Feature windows still see the full symbol sequence, separators included.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .. import _kernels as kernels
from ..charset import CharClassTable, default_table
from ..errors import NumericError
from ..labeling import TaggedSentence
from .features import FeatureTemplate, default_template, extract_features

N_LABELS = 3


@dataclass(frozen=True)
class CompiledSample:
    """Feature ids of the unmasked positions of one sentence, flattened."""

    ids: np.ndarray       # int32, all active feature ids concatenated
    offsets: np.ndarray   # int32, length n+1, slice bounds per position
    tags: np.ndarray      # int64, gold tag per unmasked position

    def __len__(self) -> int:
        return len(self.tags)


def _kept_positions(sample: TaggedSentence) -> list[int]:
    return [i for i, keep in enumerate(sample.mask) if keep]


def compile_sample(
    sample: TaggedSentence,
    vocab: dict[str, int],
    template: FeatureTemplate,
    table: CharClassTable,
    grow_vocab: bool = False,
    keep: set[str] | None = None,
) -> CompiledSample:
    ids: list[int] = []
    offsets: list[int] = [0]
    tags: list[int] = []
    for i in _kept_positions(sample):
        for feat in extract_features(sample.chars, i, template, table):
            if keep is not None and feat not in keep:
                continue
            fid = vocab.get(feat)
            if fid is None:
                if not grow_vocab:
                    continue  # unseen feature: weight 0, carries nothing
                fid = len(vocab)
                vocab[feat] = fid
            ids.append(fid)
        offsets.append(len(ids))
        tags.append(int(sample.tags[i]))
    return CompiledSample(
        ids=np.asarray(ids, dtype=np.int32),
        offsets=np.asarray(offsets, dtype=np.int32),
        tags=np.asarray(tags, dtype=np.int64),
    )


def compile_dataset(
    samples: list[TaggedSentence],
    template: FeatureTemplate | None = None,
    table: CharClassTable | None = None,
    min_feature_count: int = 1,
) -> tuple[list[CompiledSample], dict[str, int]]:
    """Build the feature vocabulary (ids in first-seen order) and compile
    every sample against it."""
    template = template or default_template()
    table = table or default_table()
    keep: set[str] | None = None
    if min_feature_count > 1:
        counts: Counter[str] = Counter()
        for sample in samples:
            for i in _kept_positions(sample):
                counts.update(extract_features(sample.chars, i, template, table))
        keep = {f for f, c in counts.items() if c >= min_feature_count}
    vocab: dict[str, int] = {}
    compiled = [
        compile_sample(s, vocab, template, table, grow_vocab=True, keep=keep)
        for s in samples
    ]
    return compiled, vocab


def theta_size(n_features: int) -> int:
    return n_features * N_LABELS + N_LABELS * N_LABELS


def unpack_theta(theta: np.ndarray, n_features: int) -> tuple[np.ndarray, np.ndarray]:
    """Views into the flat parameter vector: (state (F,3), transitions (3,3))."""
    split = n_features * N_LABELS
    return (
        theta[:split].reshape(n_features, N_LABELS),
        theta[split:].reshape(N_LABELS, N_LABELS),
    )


class CrfObjective:
    """Log-likelihood of a compiled dataset as a function of the flat
    parameter vector, with its gradient. Sentences are processed in order
    and reduced sequentially, so results are deterministic."""

    def __init__(self, samples: list[CompiledSample], n_features: int):
        self.samples = samples
        self.n_features = n_features
        self.n_params = theta_size(n_features)

    def loglik_and_grad(self, theta: np.ndarray) -> tuple[float, np.ndarray]:
        state, trans = unpack_theta(theta, self.n_features)
        grad = np.zeros_like(theta)
        grad_state, grad_trans = unpack_theta(grad, self.n_features)
        ll = 0.0
        for idx, sm in enumerate(self.samples):
            n = len(sm)
            if n == 0:
                continue
            scores = kernels.emission_scores(state, sm.ids, sm.offsets)
            log_z, node, edge = kernels.forward_backward(scores, trans)
            if not np.isfinite(log_z):
                raise NumericError(f"non-finite partition function at sentence {idx}")
            gold = sm.tags
            path = scores[np.arange(n), gold].sum()
            if n > 1:
                path += trans[gold[:-1], gold[1:]].sum()
            ll += path - log_z
            resid = -node
            resid[np.arange(n), gold] += 1.0
            kernels.emission_grad(sm.ids, sm.offsets, resid, grad_state)
            if n > 1:
                np.add.at(grad_trans, (gold[:-1], gold[1:]), 1.0)
                grad_trans -= edge
        if not np.isfinite(ll):
            raise NumericError("non-finite log-likelihood")
        return float(ll), grad


def regularized_objective(
    objective: CrfObjective, theta: np.ndarray, c1: float, c2: float
) -> tuple[float, np.ndarray]:
    """Maximize-sense value sum(log p) - c1*||w||_1 - c2*||w||_2^2 and its
    gradient, taking sign(0) = 0 for the L1 term."""
    ll, grad = objective.loglik_and_grad(theta)
    value = ll - c1 * np.abs(theta).sum() - c2 * float(theta @ theta)
    grad = grad - c1 * np.sign(theta) - 2.0 * c2 * theta
    return value, grad
