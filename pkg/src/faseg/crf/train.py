"""Elastic-net-regularized maximum-likelihood training.

The non-smooth L1 term is handled orthant-wise (OWL-QN): an L-BFGS
direction is computed from the pseudo-gradient, constrained to the current
orthant, and backtracked with an Armijo test on the full objective. With
c1=0 this reduces to plain L-BFGS. Training is full-batch and deterministic
given dataset order and configuration.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .. import _kernels as kernels
from ..charset import CharClassTable, default_table
from ..errors import NumericError, TrainingError
from ..labeling import TaggedSentence
from .features import FeatureTemplate, default_template
from .model import CrfModel
from .objective import (
    CompiledSample,
    CrfObjective,
    compile_dataset,
    compile_sample,
    regularized_objective,
    theta_size,
    unpack_theta,
)

logger = logging.getLogger(__name__)

_LINESEARCH_MAX = 50
_ARMIJO = 1e-4
_CURVATURE_MIN = 1e-10


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters; the defaults are the reference settings (elastic
    net 0.1/0.1, at most 100 iterations)."""

    c1: float = 0.1
    c2: float = 0.1
    max_iterations: int = 100
    convergence_tol: float = 1e-5
    min_feature_count: int = 1
    lbfgs_memory: int = 10

    def __post_init__(self):
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("regularization coefficients must be >= 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class IterationInfo:
    iteration: int
    objective: float                 # maximize-sense regularized value
    valid_macro_f1: float | None = None


def _pseudo_gradient(x: np.ndarray, g: np.ndarray, c1: float) -> np.ndarray:
    if c1 == 0.0:
        return g.copy()
    v = np.where(x > 0, g + c1, np.where(x < 0, g - c1, 0.0))
    at_zero = x == 0
    lo = g + c1
    hi = g - c1
    v = np.where(at_zero & (lo < 0), lo, v)
    v = np.where(at_zero & (hi > 0), hi, v)
    return v


def _two_loop(
    v: np.ndarray,
    s_mem: Sequence[np.ndarray],
    y_mem: Sequence[np.ndarray],
    rho_mem: Sequence[float],
) -> np.ndarray:
    q = v.copy()
    alphas: list[float] = []
    for s, y, rho in zip(reversed(s_mem), reversed(y_mem), reversed(rho_mem)):
        a = rho * float(s @ q)
        alphas.append(a)
        q -= a * y
    if s_mem:
        y_last = y_mem[-1]
        q *= float(s_mem[-1] @ y_last) / float(y_last @ y_last)
    for (s, y, rho), a in zip(zip(s_mem, y_mem, rho_mem), reversed(alphas)):
        b = rho * float(y @ q)
        q += (a - b) * s
    return q


def _minimize_owlqn(
    smooth: Callable[[np.ndarray], tuple[float, np.ndarray]],
    n_params: int,
    c1: float,
    max_iterations: int,
    tol: float,
    memory: int,
    on_iteration: Callable[[int, float, np.ndarray], None] | None = None,
) -> np.ndarray:
    """Minimize smooth(x) + c1*||x||_1 from x = 0."""
    x = np.zeros(n_params)
    f_smooth, g = smooth(x)
    f = f_smooth + c1 * np.abs(x).sum()
    if not np.isfinite(f):
        raise TrainingError("objective is non-finite at the starting point")
    s_mem: deque[np.ndarray] = deque(maxlen=memory)
    y_mem: deque[np.ndarray] = deque(maxlen=memory)
    rho_mem: deque[float] = deque(maxlen=memory)

    for it in range(1, max_iterations + 1):
        v = _pseudo_gradient(x, g, c1)
        if np.max(np.abs(v), initial=0.0) < 1e-12:
            break
        d = -_two_loop(v, s_mem, y_mem, rho_mem)
        if c1 > 0:
            d[d * v >= 0] = 0.0
            if not d.any():
                break
            xi = np.where(x != 0, np.sign(x), -np.sign(v))
        dir_deriv = float(v @ d)
        if dir_deriv >= 0:
            break
        alpha = 1.0 if s_mem else 1.0 / max(float(np.linalg.norm(d)), 1e-12)
        accepted = False
        for _ in range(_LINESEARCH_MAX):
            xt = x + alpha * d
            if c1 > 0:
                xt[xt * xi <= 0] = 0.0
            ft_smooth, gt = smooth(xt)
            ft = ft_smooth + c1 * np.abs(xt).sum()
            # min(0, .) keeps the accepted step monotone even if the orthant
            # projection turns the directional derivative around.
            bound = f + _ARMIJO * min(0.0, float(v @ (xt - x)))
            if np.isfinite(ft) and ft <= bound:
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            logger.debug("line search exhausted at iteration %d", it)
            break
        if ft > f + 1e-9 * max(1.0, abs(f)):
            raise TrainingError(f"objective increased at iteration {it}")
        s_vec = xt - x
        y_vec = gt - g
        ys = float(y_vec @ s_vec)
        if ys > _CURVATURE_MIN:
            s_mem.append(s_vec)
            y_mem.append(y_vec)
            rho_mem.append(1.0 / ys)
        f_prev = f
        x, f, g = xt, ft, gt
        if on_iteration is not None:
            on_iteration(it, f, x)
        if abs(f_prev - f) / max(abs(f_prev), abs(f), 1.0) < tol:
            break
    return x


def _predict_compiled(
    sample: CompiledSample, state: np.ndarray, trans: np.ndarray
) -> np.ndarray:
    scores = kernels.emission_scores(state, sample.ids, sample.offsets)
    return np.asarray(kernels.viterbi(scores, trans))


def _validation_macro_f1(
    compiled: list[CompiledSample], theta: np.ndarray, n_features: int
) -> float:
    from ..evaluation import evaluate

    state, trans = unpack_theta(theta, n_features)
    gold: list[int] = []
    pred: list[int] = []
    for sm in compiled:
        if len(sm) == 0:
            continue
        gold.extend(int(t) for t in sm.tags)
        pred.extend(int(t) for t in _predict_compiled(sm, state, trans))
    if not gold:
        return 0.0
    return evaluate(gold, pred).macro_f1


def train(
    dataset: Sequence[TaggedSentence],
    cfg: TrainConfig = TrainConfig(),
    table: CharClassTable | None = None,
    template: FeatureTemplate | None = None,
    valid: Sequence[TaggedSentence] | None = None,
    progress: Callable[[IterationInfo], None] | None = None,
) -> CrfModel:
    """Train a model; reports per-iteration objective (and validation
    macro-F1 when ``valid`` is given) through ``progress``. The validation
    score is reported only, never acted on."""
    if not dataset:
        raise TrainingError("empty dataset")
    table = table or default_table()
    template = template or default_template()
    compiled, vocab = compile_dataset(
        list(dataset), template, table, cfg.min_feature_count
    )
    objective = CrfObjective(compiled, len(vocab))
    valid_compiled = (
        [compile_sample(s, vocab, template, table) for s in valid] if valid else None
    )

    def smooth(theta: np.ndarray) -> tuple[float, np.ndarray]:
        ll, grad = objective.loglik_and_grad(theta)
        return -ll + cfg.c2 * float(theta @ theta), -grad + 2.0 * cfg.c2 * theta

    def on_iteration(it: int, f_min: float, theta: np.ndarray) -> None:
        if progress is None:
            return
        f1 = None
        if valid_compiled is not None:
            f1 = _validation_macro_f1(valid_compiled, theta, len(vocab))
        progress(IterationInfo(iteration=it, objective=-f_min, valid_macro_f1=f1))

    try:
        theta = _minimize_owlqn(
            smooth,
            theta_size(len(vocab)),
            cfg.c1,
            cfg.max_iterations,
            cfg.convergence_tol,
            cfg.lbfgs_memory,
            on_iteration,
        )
    except NumericError as exc:
        raise TrainingError(f"training diverged: {exc}") from exc
    if not np.all(np.isfinite(theta)):
        raise TrainingError("non-finite weights after training")
    state, trans = unpack_theta(theta, len(vocab))
    return CrfModel(
        state_weights=state.copy(),
        transition_weights=trans.copy(),
        feature_vocab=dict(vocab),
        template=template,
    )


def log_likelihood_and_gradient(
    model: CrfModel,
    batch: Sequence[TaggedSentence],
    cfg: TrainConfig = TrainConfig(),
    table: CharClassTable | None = None,
) -> tuple[float, np.ndarray]:
    """Regularized objective of ``batch`` under ``model`` and its gradient
    over the flat parameter vector (state weights row-major, then
    transitions). Features absent from the model vocabulary are inert."""
    table = table or default_table()
    compiled = [
        compile_sample(s, model.feature_vocab, model.template, table) for s in batch
    ]
    objective = CrfObjective(compiled, model.n_features)
    return regularized_objective(objective, model.theta(), cfg.c1, cfg.c2)
