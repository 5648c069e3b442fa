"""Stochastic corruption of clean sentences into realistic noisy inputs.

Three steps run in order on each sentence: (i) some ZWNJs become spaces,
(ii) some spaces after non-joiner characters are deleted, (iii) some of the
untouched characters get a separator perturbation. Per-sentence rates are
drawn uniformly below configured bounds. Gold tags are tracked through the
edits, never re-aligned, so the returned samples are exact by construction.

Every sentence gets its own RNG stream derived from (seed, sentence_index),
so datasets are reproducible and sentences are independent. Only the
``random`` and ``integers`` generator primitives are consumed, in a fixed
order (r1, r2, r3, then the per-step draws).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charset import SPACE, ZWNJ, CharClassTable, default_table
from .labeling import Tag, TaggedSentence, encode_retained, encode_stripped

GENERATOR_ID = "numpy-pcg64-seedseq-v1"

_EPS = 1e-9  # open-interval floor for the sampled rates


@dataclass(frozen=True)
class NoiseConfig:
    """Upper bounds for the per-sentence rates and the dataset seed."""

    r1_max: float = 0.15
    r2_max: float = 0.20
    r3_max: float = 0.05
    seed: int = 0

    def __post_init__(self):
        for name in ("r1_max", "r2_max", "r3_max"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")


@dataclass(frozen=True)
class NoiseDraw:
    """Sampled rates and the slot indices each step modified.

    Indices are in non-separator character space: slot ``i`` is the
    separator position right after the i-th non-separator character.
    """

    r1: float
    r2: float
    r3: float
    zwnj_to_space: tuple[int, ...]
    space_removed: tuple[int, ...]
    perturbed: tuple[int, ...]

    @property
    def affected_positions(self) -> dict[str, tuple[int, ...]]:
        return {
            "zwnj_to_space": self.zwnj_to_space,
            "space_removed": self.space_removed,
            "perturbed": self.perturbed,
        }


def _sentence_rng(seed: int, sentence_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(sentence_index,))
    return np.random.Generator(np.random.PCG64(ss))


def _draw_rate(gen: np.random.Generator, bound: float) -> float:
    if bound <= _EPS:
        return 0.0
    return _EPS + (bound - _EPS) * float(gen.random())


def _sample_without_replacement(
    gen: np.random.Generator, items: list[int], k: int
) -> list[int]:
    # Partial Fisher-Yates; mutates a copy, deterministic given the stream.
    pool = list(items)
    for j in range(k):
        t = int(gen.integers(j, len(pool)))
        pool[j], pool[t] = pool[t], pool[j]
    return pool[:k]


def inject_noise(
    gold: str,
    cfg: NoiseConfig,
    sentence_index: int,
    table: CharClassTable | None = None,
) -> tuple[str, TaggedSentence, NoiseDraw]:
    """Corrupt one gold sentence; returns (noisy text, mode-B sample, draw).

    Deterministic given (cfg.seed, sentence_index). Non-separator characters
    are never altered, so the sample's gold tags remain exact.
    """
    table = table or default_table()
    gen = _sentence_rng(cfg.seed, sentence_index)
    r1 = _draw_rate(gen, cfg.r1_max)
    r2 = _draw_rate(gen, cfg.r2_max)
    r3 = _draw_rate(gen, cfg.r3_max)

    base = encode_stripped(gold)
    chars = base.chars
    gold_tags = base.tags
    n = len(chars)
    seps = [{Tag.NONE: "", Tag.SPACE: SPACE, Tag.ZWNJ: ZWNJ}[t] for t in gold_tags]
    modified: set[int] = set()
    length = len(gold)

    # Step i: ZWNJ -> space.
    cands = [i for i in range(n) if seps[i] == ZWNJ]
    n1 = min(int(r1 * length), len(cands))
    step1 = sorted(_sample_without_replacement(gen, cands, n1))
    for i in step1:
        seps[i] = SPACE
        modified.add(i)

    # Step ii: delete spaces that follow a non-joiner character.
    cands = [i for i in range(n) if seps[i] == SPACE and not table.is_joiner(chars[i])]
    n2 = min(int(r2 * length), len(cands))
    step2 = sorted(_sample_without_replacement(gen, cands, n2))
    for i in step2:
        seps[i] = ""
        modified.add(i)

    # Step iii: perturb characters of the current string whose slot is still
    # untouched. Each current character maps to a slot: a separator to its
    # own slot, a plain character to the slot right after it; picking either
    # consumes the slot.
    cur_length = n + sum(1 for s in seps if s)
    n3 = int(r3 * cur_length)
    pool: list[tuple[str, int]] = []
    for i in range(n):
        if i in modified:
            continue
        pool.append(("char", i))
        if seps[i]:
            pool.append(("sep", i))
    step3: list[int] = []
    for _ in range(n3):
        if not pool:
            break
        pick = int(gen.integers(0, len(pool)))
        kind, i = pool[pick]
        coin = int(gen.integers(0, 2))
        if kind == "sep":
            if seps[i] == SPACE:
                seps[i] = "" if coin == 0 else ZWNJ
            else:
                seps[i] = "" if coin == 0 else SPACE
        else:
            if seps[i] == "":
                seps[i] = ZWNJ if coin == 0 else SPACE
            else:
                seps[i] = ""
        modified.add(i)
        step3.append(i)
        pool = [entry for entry in pool if entry[1] != i]

    noisy = "".join(ch + sep for ch, sep in zip(chars, seps))
    sample = encode_retained(noisy, gold_tags)
    draw = NoiseDraw(
        r1=r1,
        r2=r2,
        r3=r3,
        zwnj_to_space=tuple(step1),
        space_removed=tuple(step2),
        perturbed=tuple(sorted(step3)),
    )
    return noisy, sample, draw


def build_noisy_dataset(
    c, cfg: NoiseConfig, table: CharClassTable | None = None
) -> list[TaggedSentence]:
    """One mode-B sample per sentence, order preserved, reproducible from
    ``cfg.seed`` (sentence_index = position in the corpus)."""
    return [
        inject_noise(s, cfg, i, table)[1] for i, s in enumerate(c.sentences)
    ]


def dataset_metadata(cfg: NoiseConfig, tool_version: str) -> dict:
    """Header recorded in dataset files for reproducibility."""
    return {
        "generator": GENERATOR_ID,
        "numpy": np.__version__,
        "seed": cfg.seed,
        "r1_max": cfg.r1_max,
        "r2_max": cfg.r2_max,
        "r3_max": cfg.r3_max,
        "tool_version": tool_version,
    }
