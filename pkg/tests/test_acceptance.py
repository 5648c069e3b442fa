"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as they
complete.
"""

from __future__ import annotations

import dataclasses
import io

import numpy as np
import pytest

from faseg import _kernels as kernels
from faseg.charset import SPACE, ZWNJ
from faseg.corpus import Corpus
from faseg.crf import CrfModel, FeatureTemplate, TrainConfig, predict, train
from faseg.crf.objective import (
    CrfObjective,
    compile_dataset,
    regularized_objective,
    theta_size,
)
from faseg.evaluation import align_strings, evaluate, evaluate_external, macro_average
from faseg.labeling import (
    Tag,
    decode,
    encode_retained,
    encode_stripped,
    write_dataset,
)
from faseg.noise import NoiseConfig, build_noisy_dataset, inject_noise

from helpers import (
    MEEM,
    YEH,
    brute_best_path,
    brute_log_partition,
    random_valid_sentence,
    synth_corpus,
)


def _report(name: str, ok: bool, detail: str = "") -> None:
    print(f"\nACCEPTANCE [{name}] {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, f"{name} failed: {detail}"


@pytest.fixture(scope="module")
def sanity_model():
    rng = np.random.default_rng(20240807)
    train_sentences = synth_corpus(rng, 200, 20, 40)
    heldout = synth_corpus(rng, 60, 20, 40)
    model = train(
        [encode_stripped(s) for s in train_sentences],
        TrainConfig(c1=0.1, c2=0.1, max_iterations=100),
    )
    return model, heldout


def test_macro_f1_arithmetic():
    # Reference class-F1 triples whose macro averages are known to 4 decimals.
    reference = [
        ((0.9823, 0.9336, 0.5697), 0.8285),
        ((0.8923, 0.6369, 0.5664), 0.6985),
        ((0.9963, 0.9886, 0.9593), 0.9814),
    ]
    worst = max(abs(macro_average(t) - avg) for t, avg in reference)
    _report("macro-f1-arithmetic", worst <= 5e-5, f"max deviation {worst:.2e}")


def test_codec_round_trip():
    rng = np.random.default_rng(11)
    bad = sum(
        1
        for _ in range(10_000)
        if decode(encode_stripped(g := random_valid_sentence(rng, max_len=16))) != g
    )
    _report("codec-round-trip", bad == 0, f"{bad} failures out of 10000")


def test_crf_exactness():
    rng = np.random.default_rng(13)
    worst_logz = 0.0
    path_mismatches = 0
    for _ in range(200):
        length = int(rng.integers(1, 9))
        scores = np.ascontiguousarray(rng.normal(size=(length, 3)))
        trans = np.ascontiguousarray(rng.normal(size=(3, 3)))
        log_z, _, _ = kernels.forward_backward(scores, trans)
        worst_logz = max(worst_logz, abs(log_z - brute_log_partition(scores, trans)))
        if not np.array_equal(kernels.viterbi(scores, trans), brute_best_path(scores, trans)):
            path_mismatches += 1
    ok = worst_logz <= 1e-9 and path_mismatches == 0
    _report(
        "crf-exactness",
        ok,
        f"max |logZ error| {worst_logz:.2e}, {path_mismatches} path mismatches",
    )


def test_gradient_check():
    rng = np.random.default_rng(17)
    template = FeatureTemplate(window=(-2, -1, 0, 1, 2))
    worst = 0.0
    for _ in range(50):
        samples = [
            encode_stripped(random_valid_sentence(rng, max_len=6)) for _ in range(3)
        ]
        compiled, vocab = compile_dataset(samples, template)
        objective = CrfObjective(compiled, len(vocab))
        n = theta_size(len(vocab))
        theta = (0.1 + rng.uniform(0.1, 1.0, size=n)) * rng.choice([-1.0, 1.0], size=n)
        _, grad = regularized_objective(objective, theta, 0.1, 0.1)
        h = 1e-5
        for i in range(n):
            up = theta.copy(); up[i] += h
            dn = theta.copy(); dn[i] -= h
            fd = (
                regularized_objective(objective, up, 0.1, 0.1)[0]
                - regularized_objective(objective, dn, 0.1, 0.1)[0]
            ) / (2 * h)
            worst = max(worst, abs(grad[i] - fd) / max(1.0, abs(fd)))
    _report("gradient-check", worst <= 1e-4, f"max relative error {worst:.2e}")


def _heldout_macro_f1(model: CrfModel, sentences) -> float:
    gold: list[int] = []
    pred: list[int] = []
    for s in sentences:
        ts = encode_stripped(s)
        gold.extend(int(t) for t in ts.tags)
        pred.extend(int(t) for t in predict(model, ts.chars))
    return evaluate(gold, pred).macro_f1


def test_learning_sanity(sanity_model):
    model, heldout = sanity_model
    trained_f1 = _heldout_macro_f1(model, heldout)
    # Do-nothing floor: an untrained (all-zero) model, which predicts NONE
    # everywhere by tie-break.
    floor_model = CrfModel(
        state_weights=np.zeros((0, 3)),
        transition_weights=np.zeros((3, 3)),
        feature_vocab={},
        template=model.template,
    )
    floor_f1 = _heldout_macro_f1(floor_model, heldout)
    ok = trained_f1 >= 0.99 and trained_f1 > floor_f1
    _report(
        "learning-sanity",
        ok,
        f"trained macro-F1 {trained_f1:.4f}, untrained floor {floor_f1:.4f}",
    )


def test_noise_model_bounds():
    rng = np.random.default_rng(19)
    cfg = NoiseConfig(seed=23)
    violations = 0
    for idx in range(1000):
        gold = random_valid_sentence(rng, max_len=24)
        _, _, draw = inject_noise(gold, cfg, idx)
        length = len(gold)
        if (
            len(draw.zwnj_to_space) > int(cfg.r1_max * length) + 1
            or len(draw.space_removed) > int(cfg.r2_max * length) + 1
            or len(draw.perturbed) > int(cfg.r3_max * length) + 1
        ):
            violations += 1

    zero = NoiseConfig(0.0, 0.0, 0.0, seed=5)
    identity_ok = all(
        inject_noise(g := random_valid_sentence(rng, max_len=20), zero, i)[0] == g
        for i in range(100)
    )

    corpus = Corpus(
        sentences=tuple(random_valid_sentence(rng, max_len=20) for _ in range(50))
    )
    out1, out2 = io.StringIO(), io.StringIO()
    write_dataset(out1, build_noisy_dataset(corpus, cfg))
    write_dataset(out2, build_noisy_dataset(corpus, cfg))
    deterministic = out1.getvalue() == out2.getvalue()

    ok = violations == 0 and identity_ok and deterministic
    _report(
        "noise-model-bounds",
        ok,
        f"{violations} bound violations, zero-rate identity {identity_ok}, "
        f"byte-identical {deterministic}",
    )


def test_masking_semantics():
    rng = np.random.default_rng(29)
    template = FeatureTemplate(window=(-2, -1, 0, 1, 2))
    failures = 0
    trials = 0
    while trials < 100:
        gold = random_valid_sentence(rng, max_len=10)
        if SPACE not in gold and ZWNJ not in gold:
            continue
        trials += 1
        sample = encode_retained(gold, encode_stripped(gold).tags)
        masked_idx = [i for i, keep in enumerate(sample.mask) if not keep]
        flip_at = int(rng.choice(masked_idx))
        tags = list(sample.tags)
        tags[flip_at] = Tag((int(tags[flip_at]) + int(rng.integers(1, 3))) % 3)
        flipped = dataclasses.replace(sample, tags=tuple(tags))

        compiled_a, vocab = compile_dataset([sample], template)
        compiled_b, _ = compile_dataset([flipped], template)
        theta = 0.5 * rng.normal(size=theta_size(len(vocab)))
        obj_a = CrfObjective(compiled_a, len(vocab))
        obj_b = CrfObjective(compiled_b, len(vocab))
        ll_a, grad_a = obj_a.loglik_and_grad(theta)
        ll_b, grad_b = obj_b.loglik_and_grad(theta)

        pred = [int(rng.integers(0, 3)) for _ in sample.tags]
        report_a = evaluate([int(t) for t in sample.tags], pred, sample.mask)
        report_b = evaluate([int(t) for t in flipped.tags], pred, flipped.mask)

        same_report = (
            np.array_equal(report_a.confusion, report_b.confusion)
            and report_a.precision == report_b.precision
            and report_a.recall == report_b.recall
            and report_a.f1 == report_b.f1
            and report_a.macro_f1 == report_b.macro_f1
            and report_a.support == report_b.support
            and report_a.masked_skipped == report_b.masked_skipped
            and report_a.degenerate_classes == report_b.degenerate_classes
        )
        if not (ll_a == ll_b and np.array_equal(grad_a, grad_b) and same_report):
            failures += 1
    _report("masking-semantics", failures == 0, f"{failures} of 100 trials differed")


def test_alignment_round_trip():
    rng = np.random.default_rng(31)
    alphabet = list("abcdex می‌")
    bad = 0
    for _ in range(10_000):
        a = "".join(rng.choice(alphabet, size=int(rng.integers(0, 14))))
        b = "".join(rng.choice(alphabet, size=int(rng.integers(0, 14))))
        al = align_strings(a, b)
        if (
            len(al.padded_a) != len(al.padded_b)
            or "".join(c for c in al.padded_a if c is not None) != a
            or "".join(c for c in al.padded_b if c is not None) != b
        ):
            bad += 1

    imperfect = 0
    for _ in range(1000):
        g = random_valid_sentence(rng, max_len=14)
        report = evaluate_external(g, g, g)
        if report.macro_f1 != 1.0 or report.masked_skipped != 0:
            imperfect += 1

    ok = bad == 0 and imperfect == 0
    _report(
        "alignment-round-trip",
        ok,
        f"{bad} round-trip failures, {imperfect} imperfect self-evaluations",
    )


def test_end_to_end_classic_examples(sanity_model):
    from faseg.crf import correct

    model, _ = sanity_model
    word = MEEM + YEH + "کنم"       # 'mikonam' written solid
    spaced = MEEM + YEH + SPACE + "کنم"  # space for ZWNJ
    expected = MEEM + YEH + ZWNJ + "کنم"
    got_solid = correct(model, word)
    got_spaced = correct(model, spaced)
    ok = got_solid == expected and got_spaced == expected
    _report(
        "end-to-end-examples",
        ok,
        f"solid->{got_solid == expected}, spaced->{got_spaced == expected}",
    )
