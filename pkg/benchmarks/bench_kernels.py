#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Times forward-backward, Viterbi, and the emission gather/scatter on random
inputs shaped like real training batches, then reports the speedup.

Usage: python benchmarks/bench_kernels.py [--length 400] [--sentences 50]
"""

from __future__ import annotations

import argparse
import importlib
import time

import numpy as np


def _load_backends():
    backends = {}
    from faseg._kernels import pure

    backends["pure"] = pure
    try:
        fast = importlib.import_module("faseg._kernels._fast")
        backends["cython"] = fast
    except ImportError:
        print("compiled kernels not available; benchmarking pure only")
    return backends


def _make_inputs(rng, length: int, n_feats: int, vocab: int):
    scores = np.ascontiguousarray(rng.normal(size=(length, 3)))
    trans = np.ascontiguousarray(rng.normal(size=(3, 3)))
    ids = rng.integers(0, vocab, size=length * n_feats).astype(np.int32)
    offsets = (np.arange(length + 1) * n_feats).astype(np.int32)
    state = np.ascontiguousarray(rng.normal(size=(vocab, 3)))
    resid = np.ascontiguousarray(rng.normal(size=(length, 3)))
    return scores, trans, ids, offsets, state, resid


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--length", type=int, default=400, help="characters per sentence")
    ap.add_argument("--sentences", type=int, default=50)
    ap.add_argument("--features", type=int, default=15, help="active features per position")
    ap.add_argument("--vocab", type=int, default=20000)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    scores, trans, ids, offsets, state, resid = _make_inputs(
        rng, args.length, args.features, args.vocab
    )
    backends = _load_backends()
    results: dict[str, dict[str, float]] = {}

    for name, mod in backends.items():
        grad = np.zeros_like(state)
        timings = {
            "forward_backward": _time(
                lambda: [mod.forward_backward(scores, trans) for _ in range(args.sentences)],
                args.repeats,
            ),
            "viterbi": _time(
                lambda: [mod.viterbi(scores, trans) for _ in range(args.sentences)],
                args.repeats,
            ),
            "emission_scores": _time(
                lambda: [mod.emission_scores(state, ids, offsets) for _ in range(args.sentences)],
                args.repeats,
            ),
            "emission_grad": _time(
                lambda: [mod.emission_grad(ids, offsets, resid, grad) for _ in range(args.sentences)],
                args.repeats,
            ),
        }
        results[name] = timings

    header = f"{'kernel':<20} " + " ".join(f"{n:>12}" for n in results)
    if len(results) == 2:
        header += f" {'speedup':>10}"
    print(f"batch: {args.sentences} sentences x {args.length} chars, "
          f"{args.features} features/position, vocab {args.vocab}")
    print(header)
    for kernel in ("forward_backward", "viterbi", "emission_scores", "emission_grad"):
        row = f"{kernel:<20} " + " ".join(
            f"{results[n][kernel] * 1e3:>10.2f}ms" for n in results
        )
        if len(results) == 2:
            row += f" {results['pure'][kernel] / results['cython'][kernel]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
