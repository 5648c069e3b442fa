"""Trained CRF model: prediction, correction, and serialization.

The model file is versioned text: a ``CRFSEG1`` magic line followed by one
JSON object. Weights are stored as base64 of their little-endian IEEE-754
bytes, so a save/load round trip is bit-exact.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass, field
from typing import IO

import numpy as np

from .. import _kernels as kernels
from ..charset import SEPARATORS, CharClassTable, default_table, normalize_text
from ..errors import ModelFormatError
from ..labeling import Tag, TaggedSentence, decode, strip_separators
from .features import FeatureTemplate, extract_features
from .objective import N_LABELS

MAGIC = "CRFSEG1"
_FORMAT_VERSION = 1

LABELS = (Tag.NONE, Tag.SPACE, Tag.ZWNJ)


@dataclass(frozen=True)
class CrfModel:
    """Immutable after training; safe for concurrent prediction."""

    state_weights: np.ndarray        # (n_features, 3)
    transition_weights: np.ndarray   # (3, 3), indexed (from, to)
    feature_vocab: dict[str, int]
    template: FeatureTemplate
    labels: tuple[Tag, ...] = field(default=LABELS)

    def __post_init__(self):
        n = len(self.feature_vocab)
        if self.state_weights.shape != (n, N_LABELS):
            raise ValueError(
                f"state weights shape {self.state_weights.shape} does not "
                f"match vocabulary of {n} features"
            )
        if self.transition_weights.shape != (N_LABELS, N_LABELS):
            raise ValueError("transition weights must be 3x3")
        if not (
            np.all(np.isfinite(self.state_weights))
            and np.all(np.isfinite(self.transition_weights))
        ):
            raise ValueError("weights must be finite")
        ids = sorted(self.feature_vocab.values())
        if ids != list(range(n)):
            raise ValueError("feature ids must be dense and unique")

    @property
    def n_features(self) -> int:
        return len(self.feature_vocab)

    def theta(self) -> np.ndarray:
        """Flat parameter vector (state row-major, then transitions)."""
        return np.concatenate(
            [self.state_weights.ravel(), self.transition_weights.ravel()]
        )


def predict(
    model: CrfModel, chars: str, table: CharClassTable | None = None
) -> tuple[Tag, ...]:
    """Viterbi tag sequence for a separator-free character sequence; ties
    break toward the lower tag code."""
    if not chars:
        raise ValueError("cannot predict on empty input")
    for ch in chars:
        if ch in SEPARATORS:
            raise ValueError("predict expects separator-free input")
    table = table or default_table()
    ids: list[int] = []
    offsets: list[int] = [0]
    vocab = model.feature_vocab
    for i in range(len(chars)):
        for feat in extract_features(chars, i, model.template, table):
            fid = vocab.get(feat)
            if fid is not None:
                ids.append(fid)
        offsets.append(len(ids))
    scores = kernels.emission_scores(
        model.state_weights,
        np.asarray(ids, dtype=np.int32),
        np.asarray(offsets, dtype=np.int32),
    )
    path = kernels.viterbi(scores, model.transition_weights)
    return tuple(Tag(int(y)) for y in path)


def correct(model: CrfModel, raw: str, table: CharClassTable | None = None) -> str:
    """Normalize, strip all separators, predict, and re-insert separators.

    A trailing separator prediction is dropped (the label scheme has no
    separator-after-last-character case).
    """
    table = table or default_table()
    stripped = strip_separators(normalize_text(raw, table))
    if not stripped:
        return ""
    tags = list(predict(model, stripped, table))
    tags[-1] = Tag.NONE
    return decode(
        TaggedSentence(
            chars=stripped,
            tags=tuple(tags),
            mask=(True,) * len(stripped),
            source_text=raw,
        )
    )


def _encode_array(arr: np.ndarray) -> dict:
    data = np.ascontiguousarray(arr, dtype="<f8")
    return {
        "shape": list(arr.shape),
        "dtype": "<f8",
        "b64": base64.b64encode(data.tobytes()).decode("ascii"),
    }


def _decode_array(obj: dict, expected_shape: tuple[int, ...]) -> np.ndarray:
    try:
        raw = base64.b64decode(obj["b64"], validate=True)
        arr = np.frombuffer(raw, dtype=obj["dtype"]).reshape(obj["shape"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ModelFormatError(f"bad weight block: {exc}") from exc
    if tuple(arr.shape) != expected_shape:
        raise ModelFormatError(
            f"weight shape {tuple(arr.shape)} does not match {expected_shape}"
        )
    return arr.astype(np.float64).copy()


def save_model(model: CrfModel, sink: IO[str] | str) -> None:
    features = [None] * model.n_features
    for feat, fid in model.feature_vocab.items():
        features[fid] = feat
    payload = {
        "format_version": _FORMAT_VERSION,
        "labels": [label.name for label in model.labels],
        "template": {
            "window": list(model.template.window),
            "booleans": list(model.template.booleans),
        },
        "features": features,
        "state_weights": _encode_array(model.state_weights),
        "transition_weights": _encode_array(model.transition_weights),
    }
    text = MAGIC + "\n" + json.dumps(payload, ensure_ascii=False) + "\n"
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w", encoding="utf-8") as fh:
            fh.write(text)


def load_model(source: IO[str] | str) -> CrfModel:
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    magic, _, rest = text.partition("\n")
    if magic.strip() != MAGIC:
        raise ModelFormatError(f"bad magic: {magic[:20]!r}")
    try:
        payload = json.loads(rest)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"truncated or corrupt model file: {exc}") from exc
    version = payload.get("format_version")
    if version != _FORMAT_VERSION:
        raise ModelFormatError(f"unsupported format version: {version}")
    try:
        features = payload["features"]
        template = FeatureTemplate(
            window=tuple(payload["template"]["window"]),
            booleans=tuple(payload["template"]["booleans"]),
        )
        labels = tuple(Tag[name] for name in payload["labels"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ModelFormatError(f"missing or bad field: {exc}") from exc
    if len(set(features)) != len(features):
        raise ModelFormatError("duplicate feature strings")
    n = len(features)
    state = _decode_array(payload["state_weights"], (n, N_LABELS))
    trans = _decode_array(payload["transition_weights"], (N_LABELS, N_LABELS))
    return CrfModel(
        state_weights=state,
        transition_weights=trans,
        feature_vocab={feat: fid for fid, feat in enumerate(features)},
        template=template,
        labels=labels,
    )
