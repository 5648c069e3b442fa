"""Shared test utilities: synthetic corpora and independent oracles.

The brute-force functions enumerate all 3^n tag paths and are kept free of
the package's dynamic-programming code so they can vouch for it.
"""

from __future__ import annotations

import itertools

import numpy as np

from faseg.labeling import Tag, TaggedSentence, decode

# Synthetic separator rules: a space always follows DAL (a non-joiner), a
# ZWNJ always follows the bigram MEEM+YEH ("mi" prefix); sentence-final
# characters carry no separator.
DAL = "د"
MEEM = "م"
YEH = "ی"
SYNTH_POOL = (MEEM, YEH, DAL, "ا", "ب", "ت", "ن", "ک", "ر", "س")
SYNTH_PROBS = (0.20, 0.20, 0.12, 0.08, 0.08, 0.08, 0.08, 0.08, 0.04, 0.04)


def synth_tags(chars: str) -> tuple[Tag, ...]:
    n = len(chars)
    tags = []
    for i, ch in enumerate(chars):
        if i == n - 1:
            tags.append(Tag.NONE)
        elif ch == DAL:
            tags.append(Tag.SPACE)
        elif ch == YEH and i > 0 and chars[i - 1] == MEEM:
            tags.append(Tag.ZWNJ)
        else:
            tags.append(Tag.NONE)
    return tuple(tags)


def synth_sentence(rng: np.random.Generator, n_chars: int) -> str:
    chars = "".join(rng.choice(SYNTH_POOL, size=n_chars, p=SYNTH_PROBS))
    tags = synth_tags(chars)
    return decode(
        TaggedSentence(chars=chars, tags=tags, mask=(True,) * n_chars, source_text="")
    )


def synth_corpus(
    rng: np.random.Generator, n_sentences: int, min_len: int = 20, max_len: int = 40
) -> list[str]:
    return [
        synth_sentence(rng, int(rng.integers(min_len, max_len + 1)))
        for _ in range(n_sentences)
    ]


# Alphabet for random gold sentences: Persian letters of every joining
# class, Latin, and digits. No separators (those come from the tags).
SENTENCE_ALPHABET = tuple("میداربکنءabz19۳")


def random_valid_sentence(rng: np.random.Generator, max_len: int = 12) -> str:
    """Any tag sequence ending in NONE decodes to a legal gold sentence."""
    n = int(rng.integers(1, max_len + 1))
    chars = "".join(rng.choice(SENTENCE_ALPHABET, size=n))
    tags = [int(t) for t in rng.choice([0, 0, 1, 2], size=n)]
    tags[-1] = 0
    ts = TaggedSentence(
        chars=chars,
        tags=tuple(Tag(t) for t in tags),
        mask=(True,) * n,
        source_text="",
    )
    return decode(ts)


# --- brute-force CRF oracles ------------------------------------------------

def _all_paths(n: int, k: int = 3) -> np.ndarray:
    # Lexicographic order, so the first maximum is the lowest-tag tie-break.
    return np.array(list(itertools.product(range(k), repeat=n)), dtype=np.int64)


def brute_path_scores(scores: np.ndarray, trans: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n, k = scores.shape
    paths = _all_paths(n, k)
    vals = scores[np.arange(n), paths].sum(axis=1)
    if n > 1:
        vals = vals + trans[paths[:, :-1], paths[:, 1:]].sum(axis=1)
    return paths, vals


def brute_log_partition(scores: np.ndarray, trans: np.ndarray) -> float:
    _, vals = brute_path_scores(scores, trans)
    return float(np.logaddexp.reduce(np.sort(vals)))


def brute_best_path(scores: np.ndarray, trans: np.ndarray) -> np.ndarray:
    paths, vals = brute_path_scores(scores, trans)
    return paths[int(np.argmax(vals))]  # first max = lexicographically lowest


def brute_loglik(scores: np.ndarray, trans: np.ndarray, tags: np.ndarray) -> float:
    n = scores.shape[0]
    gold = float(scores[np.arange(n), tags].sum())
    if n > 1:
        gold += float(trans[tags[:-1], tags[1:]].sum())
    return gold - brute_log_partition(scores, trans)


def lcs_length(a: str, b: str) -> int:
    """Classic O(len(a)*len(b)) longest-common-subsequence table."""
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0]
        for j, cb in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if ca == cb else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]
