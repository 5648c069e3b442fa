"""Per-position observation features over a character window."""

from __future__ import annotations

from dataclasses import dataclass

from ..charset import CharClassTable, default_table

BOS = "<s>"
EOS = "</s>"

_DEFAULT_WINDOW = tuple(range(-5, 6))
_DEFAULT_BOOLEANS = ("is_first", "is_last", "is_joiner", "is_digit")


@dataclass(frozen=True)
class FeatureTemplate:
    """Character-identity features over ``window`` offsets plus Boolean
    features on the focus character. Offset 0 must be present."""

    window: tuple[int, ...] = _DEFAULT_WINDOW
    booleans: tuple[str, ...] = _DEFAULT_BOOLEANS

    def __post_init__(self):
        if len(set(self.window)) != len(self.window):
            raise ValueError("window offsets must be distinct")
        if 0 not in self.window:
            raise ValueError("window must include offset 0 (the focus)")
        unknown = set(self.booleans) - set(_DEFAULT_BOOLEANS)
        if unknown:
            raise ValueError(f"unknown boolean features: {sorted(unknown)}")


def extract_features(
    chars: str,
    i: int,
    template: FeatureTemplate | None = None,
    table: CharClassTable | None = None,
) -> list[str]:
    """Feature strings for position ``i``.

    One feature per window offset (out-of-range offsets yield a boundary
    sentinel so the feature count is position-independent), plus the
    Boolean features that hold for the focus character.
    """
    if not 0 <= i < len(chars):
        raise IndexError(f"position {i} out of range for {len(chars)} chars")
    template = template or _DEFAULT_TEMPLATE
    table = table or default_table()
    n = len(chars)
    feats: list[str] = []
    for off in template.window:
        j = i + off
        if j < 0:
            value = BOS
        elif j >= n:
            value = EOS
        else:
            value = chars[j]
        feats.append(f"w[{off}]={value}")
    focus = chars[i]
    if "is_first" in template.booleans and i == 0:
        feats.append("is_first")
    if "is_last" in template.booleans and i == n - 1:
        feats.append("is_last")
    if "is_joiner" in template.booleans and table.is_joiner(focus):
        feats.append("is_joiner")
    if "is_digit" in template.booleans and table.is_digit(focus):
        feats.append("is_digit")
    return feats


_DEFAULT_TEMPLATE = FeatureTemplate()


def default_template() -> FeatureTemplate:
    return _DEFAULT_TEMPLATE
