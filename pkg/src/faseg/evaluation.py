"""Metrics, the do-nothing baseline, and string alignment for external tools.

Per-class precision/recall/F1 over the 3-tag space plus their unweighted
macro average, computed from a 3x3 confusion matrix. Corrected strings that
may add or remove characters are aligned to the gold text with a
longest-matching-block recursion and scored only on columns where both
sides agree on the non-separator character.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .charset import SPACE, ZWNJ
from .corpus import ParallelPair
from .errors import NotComparableError
from .labeling import Tag, encode_stripped

N_CLASSES = 3
_CLASS_NAMES = ("0 (none)", "1 (space)", "2 (zwnj)")


@dataclass(frozen=True)
class EvalReport:
    confusion: np.ndarray            # (3,3) counts, indexed (gold, predicted)
    precision: tuple[float, float, float]
    recall: tuple[float, float, float]
    f1: tuple[float, float, float]
    macro_f1: float
    support: tuple[int, int, int]
    masked_skipped: int
    degenerate_classes: tuple[int, ...]  # absent in gold and never predicted


def macro_average(f1_scores: Iterable[float]) -> float:
    """Unweighted arithmetic mean of per-class F1 scores."""
    scores = list(f1_scores)
    return sum(scores) / len(scores)


def _report_from_confusion(confusion: np.ndarray, masked_skipped: int) -> EvalReport:
    support = confusion.sum(axis=1)
    predicted = confusion.sum(axis=0)
    diag = np.diag(confusion)
    precision: list[float] = []
    recall: list[float] = []
    f1: list[float] = []
    degenerate: list[int] = []
    for k in range(N_CLASSES):
        if support[k] == 0 and predicted[k] == 0:
            degenerate.append(k)
            precision.append(1.0)
            recall.append(1.0)
            f1.append(1.0)
            continue
        p = float(diag[k] / predicted[k]) if predicted[k] else 0.0
        r = float(diag[k] / support[k]) if support[k] else 0.0
        precision.append(p)
        recall.append(r)
        f1.append(2 * p * r / (p + r) if p + r > 0 else 0.0)
    return EvalReport(
        confusion=confusion,
        precision=tuple(precision),
        recall=tuple(recall),
        f1=tuple(f1),
        macro_f1=macro_average(f1),
        support=tuple(int(s) for s in support),
        masked_skipped=masked_skipped,
        degenerate_classes=tuple(degenerate),
    )


def evaluate(
    gold_tags: Sequence[int],
    pred_tags: Sequence[int],
    mask: Sequence[bool] | None = None,
) -> EvalReport:
    """Confusion matrix and rates over the unmasked positions."""
    if len(gold_tags) != len(pred_tags):
        raise ValueError(
            f"length mismatch: {len(gold_tags)} gold vs {len(pred_tags)} predicted"
        )
    if mask is not None and len(mask) != len(gold_tags):
        raise ValueError("mask length differs from tag length")
    gold = np.asarray(gold_tags, dtype=np.int64)
    pred = np.asarray(pred_tags, dtype=np.int64)
    skipped = 0
    if mask is not None:
        keep = np.asarray(mask, dtype=bool)
        skipped = int((~keep).sum())
        gold = gold[keep]
        pred = pred[keep]
    confusion = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    np.add.at(confusion, (gold, pred), 1)
    return _report_from_confusion(confusion, skipped)


def score_baseline(pair: ParallelPair) -> EvalReport:
    """Treat the raw text's separator decisions as predictions of the gold
    tags. Both sides must share the same non-separator characters."""
    raw = encode_stripped(pair.raw)
    gold = encode_stripped(pair.gold)
    if raw.chars != gold.chars:
        raise NotComparableError(
            "raw and gold differ in non-separator characters; "
            "use evaluate_external instead"
        )
    return evaluate(gold.tags, raw.tags)


@dataclass(frozen=True)
class Alignment:
    """Equal-length padded views of two strings; ``None`` is the placeholder
    (an out-of-alphabet sentinel, never written to user-facing output)."""

    padded_a: tuple[str | None, ...]
    padded_b: tuple[str | None, ...]
    ops: tuple[tuple[int, int, int], ...]  # matching blocks (a_start, b_start, size)


def align_strings(a: str, b: str) -> Alignment:
    """Longest-matching-block recursion (leftmost-longest wins); gap
    segments are left-aligned and padded to a common width."""
    matcher = difflib.SequenceMatcher(a=a, b=b, autojunk=False)
    blocks = matcher.get_matching_blocks()
    padded_a: list[str | None] = []
    padded_b: list[str | None] = []
    ops: list[tuple[int, int, int]] = []
    ia = ib = 0
    for sa, sb, size in blocks:
        gap_a = a[ia:sa]
        gap_b = b[ib:sb]
        width = max(len(gap_a), len(gap_b))
        padded_a.extend(gap_a)
        padded_a.extend([None] * (width - len(gap_a)))
        padded_b.extend(gap_b)
        padded_b.extend([None] * (width - len(gap_b)))
        padded_a.extend(a[sa : sa + size])
        padded_b.extend(b[sb : sb + size])
        ia, ib = sa + size, sb + size
        if size:
            ops.append((sa, sb, size))
    return Alignment(
        padded_a=tuple(padded_a), padded_b=tuple(padded_b), ops=tuple(ops)
    )


def _surface_tags(text: str) -> tuple[str, list[Tag]]:
    # Tag of each non-separator character = the separator right after it;
    # tolerant of arbitrary runs (only the first member of a run counts).
    chars: list[str] = []
    tags: list[Tag] = []
    for i, ch in enumerate(text):
        if ch == SPACE or ch == ZWNJ:
            continue
        nxt = text[i + 1] if i + 1 < len(text) else ""
        if nxt == SPACE:
            tags.append(Tag.SPACE)
        elif nxt == ZWNJ:
            tags.append(Tag.ZWNJ)
        else:
            tags.append(Tag.NONE)
        chars.append(ch)
    return "".join(chars), tags


def evaluate_external(original: str, corrected: str, gold: str) -> EvalReport:
    """Score an external tool's output that may add or remove characters.

    ``corrected`` is aligned to ``gold`` over non-separator characters;
    columns with placeholders or differing characters are excluded and
    counted in ``masked_skipped``. ``original`` is accepted for interface
    completeness and diagnostics; it does not enter the metrics.
    """
    del original
    corr_chars, corr_tags = _surface_tags(corrected)
    gold_chars, gold_tags = _surface_tags(gold)
    alignment = align_strings(corr_chars, gold_chars)
    confusion = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    skipped = 0
    ia = ib = 0
    for ca, cb in zip(alignment.padded_a, alignment.padded_b):
        pred = corr_tags[ia] if ca is not None else None
        want = gold_tags[ib] if cb is not None else None
        if ca is not None:
            ia += 1
        if cb is not None:
            ib += 1
        if ca is not None and cb is not None and ca == cb:
            confusion[int(want), int(pred)] += 1
        else:
            skipped += 1
    return _report_from_confusion(confusion, skipped)


def merge_reports(reports: Iterable[EvalReport]) -> EvalReport:
    """Sum confusion matrices and skipped counts, then recompute rates."""
    confusion = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    skipped = 0
    for r in reports:
        confusion += r.confusion
        skipped += r.masked_skipped
    return _report_from_confusion(confusion, skipped)


def format_report(report: EvalReport) -> str:
    """Human-readable table (per-class P/R/F1, support, macro-F1)."""
    lines = [
        f"{'class':<12} {'precision':>10} {'recall':>10} {'f1':>10} {'support':>10}"
    ]
    for k in range(N_CLASSES):
        flag = "  (no gold/pred)" if k in report.degenerate_classes else ""
        lines.append(
            f"{_CLASS_NAMES[k]:<12} {report.precision[k]:>10.4f} "
            f"{report.recall[k]:>10.4f} {report.f1[k]:>10.4f} "
            f"{report.support[k]:>10d}{flag}"
        )
    lines.append(f"{'macro-F1':<12} {report.macro_f1:>43.4f}")
    lines.append(f"{'skipped':<12} {report.masked_skipped:>43d}")
    return "\n".join(lines)


def report_to_kv(report: EvalReport) -> str:
    """Machine-readable key=value lines with all counts and rates."""
    lines: list[str] = []
    for g in range(N_CLASSES):
        for p in range(N_CLASSES):
            lines.append(f"confusion.{g}.{p}={int(report.confusion[g, p])}")
    for k in range(N_CLASSES):
        lines.append(f"class.{k}.precision={report.precision[k]:.6f}")
        lines.append(f"class.{k}.recall={report.recall[k]:.6f}")
        lines.append(f"class.{k}.f1={report.f1[k]:.6f}")
        lines.append(f"class.{k}.support={report.support[k]}")
    lines.append(f"macro_f1={report.macro_f1:.6f}")
    lines.append(f"masked_skipped={report.masked_skipped}")
    degenerate = ",".join(str(k) for k in report.degenerate_classes)
    lines.append(f"degenerate_classes={degenerate}")
    return "\n".join(lines)
