"""Corpus ingestion, preprocessing, and deterministic splits.

Two input formats: plain (one sentence per line, tokens separated by single
spaces) and columns (token<TAB>tag lines with blank-line sentence breaks;
tags are read and discarded, intra-token spaces become ZWNJs).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .charset import SEPARATORS, SPACE, ZWNJ, CharClassTable, normalize_text
from .errors import CorpusFormatError, EmptyCorpusError, InvalidSentenceError

logger = logging.getLogger(__name__)

_EDGE_SEPARATORS = SPACE + ZWNJ


@dataclass(frozen=True)
class Corpus:
    """Ordered gold sentences: normalized, single spaces between tokens,
    ZWNJ only inside tokens, no leading/trailing/adjacent separators."""

    sentences: tuple[str, ...]
    provenance: str = ""

    def __post_init__(self):
        for i, s in enumerate(self.sentences):
            _check_sentence(s, i)

    def __len__(self) -> int:
        return len(self.sentences)


def _check_sentence(s: str, index: int) -> None:
    if not s:
        raise InvalidSentenceError(f"sentence {index} is empty")
    if s[0] in SEPARATORS or s[-1] in SEPARATORS:
        raise InvalidSentenceError(f"sentence {index} starts/ends with a separator")
    for a, b in zip(s, s[1:]):
        if a in SEPARATORS and b in SEPARATORS:
            raise InvalidSentenceError(f"sentence {index} has adjacent separators")


@dataclass(frozen=True)
class SplitSpec:
    """First ``test_fraction`` of sentences for testing, next
    ``valid_fraction`` for validation, the rest for training."""

    test_fraction: float = 0.10
    valid_fraction: float = 0.10

    def __post_init__(self):
        if not (0 <= self.test_fraction and 0 <= self.valid_fraction):
            raise ValueError("fractions must be non-negative")
        if self.test_fraction + self.valid_fraction >= 1:
            raise ValueError("test_fraction + valid_fraction must be < 1")


@dataclass(frozen=True)
class ParallelPair:
    """Raw text as found in the wild next to its manually corrected form."""

    raw: str
    gold: str


class CorpusStats(NamedTuple):
    words: int
    characters: int


def _decode_line(raw: bytes | str, lineno: int) -> str:
    if isinstance(raw, str):
        return raw
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusFormatError(f"invalid UTF-8 ({exc.reason})", lineno) from exc


def _clean_sentence(text: str, table: CharClassTable | None) -> str:
    s = normalize_text(text, table)
    s = " ".join(s.split())          # absorbs tabs and stray whitespace
    s = normalize_text(s, table)     # re-collapse separators around joins
    return s.strip(_EDGE_SEPARATORS)


def load_tokenized_corpus(
    lines: Iterable[bytes | str],
    fmt: str = "plain",
    table: CharClassTable | None = None,
    provenance: str = "",
) -> Corpus:
    """Read a tokenized training corpus.

    ``fmt='plain'``: one sentence per line; empty lines are skipped (a
    single warning reports the count). ``fmt='columns'``: token<TAB>tag
    lines, blank line ends a sentence; spaces inside the token field are
    converted to ZWNJ.
    """
    if fmt not in ("plain", "columns"):
        raise ValueError(f"unknown corpus format: {fmt!r}")
    sentences: list[str] = []
    skipped = 0

    if fmt == "plain":
        for lineno, raw in enumerate(lines, start=1):
            line = _decode_line(raw, lineno).rstrip("\n")
            if not line.strip():
                skipped += 1
                continue
            s = _clean_sentence(line, table)
            if s:
                sentences.append(s)
            else:
                skipped += 1
    else:
        tokens: list[str] = []

        def flush():
            if tokens:
                s = _clean_sentence(" ".join(tokens), table)
                if s:
                    sentences.append(s)
                tokens.clear()

        for lineno, raw in enumerate(lines, start=1):
            line = _decode_line(raw, lineno).rstrip("\n")
            if not line.strip():
                flush()
                continue
            token = line.split("\t", 1)[0]
            tokens.append(token.replace(SPACE, ZWNJ))
        flush()

    if skipped:
        logger.warning("skipped %d empty line(s)", skipped)
    return Corpus(sentences=tuple(sentences), provenance=provenance)


def split_corpus(c: Corpus, spec: SplitSpec = SplitSpec()) -> tuple[Corpus, Corpus, Corpus]:
    """Deterministic (test, valid, train) split by original sentence order,
    with floor rounding; the concatenation test+valid+train equals ``c``."""
    n = len(c)
    if n == 0:
        raise EmptyCorpusError("cannot split an empty corpus")
    n_test = int(spec.test_fraction * n)
    n_valid = int(spec.valid_fraction * n)
    parts = (
        c.sentences[:n_test],
        c.sentences[n_test : n_test + n_valid],
        c.sentences[n_test + n_valid :],
    )
    return tuple(
        Corpus(sentences=part, provenance=f"{c.provenance}[{name}]")
        for part, name in zip(parts, ("test", "valid", "train"))
    )


def load_parallel(
    lines: Iterable[bytes | str],
    table: CharClassTable | None = None,
    strict: bool = False,
) -> list[ParallelPair]:
    """Read ``raw<TAB>gold`` lines; both sides are normalized.

    With ``strict=True``, a pair whose sides differ in non-separator
    characters raises :class:`CorpusFormatError`.
    """
    pairs: list[ParallelPair] = []
    for lineno, raw_line in enumerate(lines, start=1):
        line = _decode_line(raw_line, lineno).rstrip("\n")
        if not line.strip():
            continue
        if "\t" not in line:
            raise CorpusFormatError("expected raw<TAB>gold", lineno)
        raw, gold = line.split("\t", 1)
        raw = _clean_sentence(raw, table)
        gold = _clean_sentence(gold, table)
        if strict:
            raw_chars = [ch for ch in raw if ch not in SEPARATORS]
            gold_chars = [ch for ch in gold if ch not in SEPARATORS]
            if raw_chars != gold_chars:
                raise CorpusFormatError(
                    "raw and gold differ outside separators", lineno
                )
        pairs.append(ParallelPair(raw=raw, gold=gold))
    return pairs


def corpus_stats(c: Corpus, include_separators: bool = True) -> CorpusStats:
    """Word and character counts; characters include separators unless
    ``include_separators=False`` (both conventions exist in the wild)."""
    words = 0
    characters = 0
    for s in c.sentences:
        words += s.count(SPACE) + 1
        if include_separators:
            characters += len(s)
        else:
            characters += len(s) - s.count(SPACE) - s.count(ZWNJ)
    return CorpusStats(words=words, characters=characters)
