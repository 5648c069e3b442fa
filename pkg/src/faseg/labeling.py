"""Conversion between surface text and per-character 3-class tags.

Tag 0 = nothing after the character, 1 = space after it, 2 = ZWNJ after it.
Two encodings exist: the stripped one (mode A), where all separators are
removed from the input and every position counts, and the retained one
(mode B), where separators stay in the symbol sequence but are masked out
of loss and metrics.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

from .charset import SEPARATORS, SPACE, ZWNJ
from .errors import CorpusFormatError, InvalidSentenceError, TagAlignmentError


class Tag(enum.IntEnum):
    NONE = 0
    SPACE = 1
    ZWNJ = 2


_TAG_TO_SEPARATOR = {Tag.NONE: "", Tag.SPACE: SPACE, Tag.ZWNJ: ZWNJ}
_SEPARATOR_TO_TAG = {SPACE: Tag.SPACE, ZWNJ: Tag.ZWNJ}


@dataclass(frozen=True)
class TaggedSentence:
    """A symbol sequence with one tag and one mask flag per symbol.

    Mode-A sentences contain no separators and are fully unmasked. Mode-B
    samples keep separator symbols; those positions carry ``mask=False``
    and a placeholder tag that is never read.
    """

    chars: str
    tags: tuple[Tag, ...]
    mask: tuple[bool, ...]
    source_text: str

    def __post_init__(self):
        if not (len(self.chars) == len(self.tags) == len(self.mask)):
            raise TagAlignmentError(
                f"lengths differ: {len(self.chars)} chars, "
                f"{len(self.tags)} tags, {len(self.mask)} mask flags"
            )
        for ch, keep in zip(self.chars, self.mask):
            if keep and ch in SEPARATORS:
                raise InvalidSentenceError(
                    "separator symbol at an unmasked position"
                )
        if self.mask and self.mask[-1] and self.tags[-1] != Tag.NONE:
            raise InvalidSentenceError("final unmasked tag must be NONE")

    def __len__(self) -> int:
        return len(self.chars)


def encode_stripped(gold: str) -> TaggedSentence:
    """Mode-A encoding: drop separators, record them as tags.

    ``gold`` must have no leading/trailing separator and no two adjacent
    ones (the corpus loader guarantees this).
    """
    chars: list[str] = []
    tags: list[Tag] = []
    for ch in gold:
        sep_tag = _SEPARATOR_TO_TAG.get(ch)
        if sep_tag is None:
            chars.append(ch)
            tags.append(Tag.NONE)
        else:
            if not chars:
                raise InvalidSentenceError("sentence starts with a separator")
            if tags[-1] != Tag.NONE:
                raise InvalidSentenceError("adjacent separators in sentence")
            tags[-1] = sep_tag
    if tags and tags[-1] != Tag.NONE:
        raise InvalidSentenceError("sentence ends with a separator")
    n = len(chars)
    return TaggedSentence(
        chars="".join(chars),
        tags=tuple(tags),
        mask=(True,) * n,
        source_text=gold,
    )


def decode(t: TaggedSentence) -> str:
    """Inverse of :func:`encode_stripped`: re-insert separators after tags.

    Requires a separator-free symbol sequence (mode A or a prediction over
    stripped characters).
    """
    for ch in t.chars:
        if ch in SEPARATORS:
            raise InvalidSentenceError("decode needs separator-free chars")
    return "".join(ch + _TAG_TO_SEPARATOR[Tag(tag)] for ch, tag in zip(t.chars, t.tags))


def encode_retained(noisy: str, gold_tags: Iterable[Tag]) -> TaggedSentence:
    """Mode-B encoding: keep separators as (masked) input symbols.

    ``gold_tags`` are the tags of the non-separator characters of ``noisy``
    in order; a count mismatch raises :class:`TagAlignmentError`.
    """
    pending = list(gold_tags)
    pending.reverse()
    tags: list[Tag] = []
    mask: list[bool] = []
    for ch in noisy:
        if ch in SEPARATORS:
            tags.append(Tag.NONE)  # placeholder, never read
            mask.append(False)
        else:
            if not pending:
                raise TagAlignmentError("more non-separator characters than tags")
            tags.append(Tag(pending.pop()))
            mask.append(True)
    if pending:
        raise TagAlignmentError("more tags than non-separator characters")
    return TaggedSentence(
        chars=noisy, tags=tuple(tags), mask=tuple(mask), source_text=noisy
    )


def strip_separators(text: str) -> str:
    return "".join(ch for ch in text if ch not in SEPARATORS)


# --- dataset files ---------------------------------------------------------
#
# One sample per line: symbols<TAB>tags<TAB>mask, with tags as digits and
# the mask as a T/F string. An optional first line `#meta {...}` carries
# JSON metadata (seed, rates, generator id, tool version).

_META_PREFIX = "#meta "


def format_sample(t: TaggedSentence) -> str:
    tags = "".join(str(int(tag)) for tag in t.tags)
    mask = "".join("T" if m else "F" for m in t.mask)
    return f"{t.chars}\t{tags}\t{mask}"


def parse_sample(line: str, lineno: int | None = None) -> TaggedSentence:
    parts = line.rstrip("\n").split("\t")
    if len(parts) != 3:
        raise CorpusFormatError("expected symbols<TAB>tags<TAB>mask", lineno)
    chars, tags_s, mask_s = parts
    if not (len(chars) == len(tags_s) == len(mask_s)):
        raise CorpusFormatError("field lengths differ", lineno)
    try:
        tags = tuple(Tag(int(d)) for d in tags_s)
    except ValueError as exc:
        raise CorpusFormatError(f"bad tag digit: {exc}", lineno) from exc
    if any(m not in "TF" for m in mask_s):
        raise CorpusFormatError("mask must be T/F", lineno)
    mask = tuple(m == "T" for m in mask_s)
    return TaggedSentence(chars=chars, tags=tags, mask=mask, source_text=chars)


def write_dataset(
    out: IO[str], samples: Iterable[TaggedSentence], meta: dict | None = None
) -> None:
    if meta is not None:
        out.write(_META_PREFIX + json.dumps(meta, sort_keys=True) + "\n")
    for sample in samples:
        out.write(format_sample(sample) + "\n")


def read_dataset(src: IO[str]) -> tuple[list[TaggedSentence], dict | None]:
    meta: dict | None = None
    samples: list[TaggedSentence] = []
    for lineno, line in enumerate(src, start=1):
        if lineno == 1 and line.startswith(_META_PREFIX):
            meta = json.loads(line[len(_META_PREFIX):])
            continue
        if not line.strip():
            continue
        samples.append(parse_sample(line, lineno))
    return samples, meta


def iter_dataset(src: IO[str]) -> Iterator[TaggedSentence]:
    for lineno, line in enumerate(src, start=1):
        if lineno == 1 and line.startswith(_META_PREFIX):
            continue
        if not line.strip():
            continue
        yield parse_sample(line, lineno)
