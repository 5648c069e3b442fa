"""Persian/Arabic-script character knowledge.

Joining classification, digit detection, and text normalization. All
operations are total and pure; tables are immutable after construction and
safe to share between threads.
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass, field

from .errors import TableError

SPACE = " "
ZWNJ = "‌"
SEPARATORS = frozenset((SPACE, ZWNJ))

# Arabic-script blocks: Arabic, Supplement, Extended-B, Extended-A,
# Presentation Forms A and B.
_ARABIC_BLOCKS = (
    (0x0600, 0x06FF),
    (0x0750, 0x077F),
    (0x0870, 0x089F),
    (0x08A0, 0x08FF),
    (0xFB50, 0xFDFF),
    (0xFE70, 0xFEFF),
)

# Letters with Unicode joining type R (connect to the preceding letter only):
# alef/dal/reh/waw families. Everything else that is a letter inside the
# Arabic blocks joins on both sides (type D) unless listed in _NON_JOINING.
_RIGHT_JOINING = frozenset(
    chr(cp)
    for cp in (
        [0x0622, 0x0623, 0x0624, 0x0625, 0x0627, 0x0629]
        + [0x062F, 0x0630, 0x0631, 0x0632, 0x0648]
        + [0x0671, 0x0672, 0x0673, 0x0675, 0x0676, 0x0677]
        + list(range(0x0688, 0x069A))          # dal/reh variants incl. jeh
        + [0x06C0, 0x06C3]
        + list(range(0x06C4, 0x06CC))          # waw/oe/yu variants
        + [0x06CD, 0x06CF, 0x06D2, 0x06D3, 0x06D5, 0x06EE, 0x06EF]
        + [0x0759, 0x075A, 0x075B, 0x076B, 0x076C, 0x0771]
        + [0x0773, 0x0774, 0x0778, 0x0779]
    )
)

# Letters with joining type U (connect on neither side).
_NON_JOINING = frozenset((chr(0x0621), chr(0x0674)))  # hamza, high hamza

ASCII_DIGITS = frozenset("0123456789")
PERSIAN_DIGITS = frozenset(chr(c) for c in range(0x06F0, 0x06FA))
ARABIC_INDIC_DIGITS = frozenset(chr(c) for c in range(0x0660, 0x066A))

# Arabic-to-Persian canonical forms plus removal of invisible format
# characters. Values must be fixed points of the map (checked on build) and
# must never contain SPACE or ZWNJ.
_DEFAULT_NORMALIZATION = {
    "ك": "ک",  # ARABIC KAF -> FARSI KEHEH
    "ي": "ی",  # ARABIC YEH -> FARSI YEH
    "ى": "ی",  # ALEF MAKSURA -> FARSI YEH
    "أ": "ا",  # ALEF WITH HAMZA ABOVE -> ALEF
    "إ": "ا",  # ALEF WITH HAMZA BELOW -> ALEF
    "ٱ": "ا",  # ALEF WASLA -> ALEF
    "ة": "ه",  # TEH MARBUTA -> HEH
    "ـ": "",        # TATWEEL removed
    "‍": "",        # ZWJ removed (never part of the label scheme)
    "​": "",        # ZERO WIDTH SPACE removed
    "‎": "",        # LEFT-TO-RIGHT MARK removed
    "‏": "",        # RIGHT-TO-LEFT MARK removed
    "﻿": "",        # BOM removed
    "­": "",        # SOFT HYPHEN removed
}

_DIGIT_UNIFICATION = {
    chr(0x0660 + i): chr(0x06F0 + i) for i in range(10)
}  # Arabic-Indic -> Persian digits


class JoinerClass(enum.Enum):
    """How a character connects to its neighbours in cursive script."""

    DUAL_JOINING = "dual"          # connects to the following letter
    RIGHT_JOINING_ONLY = "right"   # connects to the preceding letter only
    NON_JOINING = "none"           # Arabic-script letter, connects to neither
    NON_LETTER = "nonletter"       # everything else (incl. outside the script)


def _in_arabic_blocks(cp: int) -> bool:
    return any(lo <= cp <= hi for lo, hi in _ARABIC_BLOCKS)


def _validate_normalization(mapping: dict[str, str]) -> None:
    for src, dst in mapping.items():
        if len(src) != 1:
            raise TableError(f"normalization key must be one character: {src!r}")
        if src in SEPARATORS:
            raise TableError("normalization must not remap SPACE or ZWNJ")
        for ch in dst:
            if ch in SEPARATORS:
                raise TableError(
                    f"normalization of {src!r} would produce a separator"
                )
            rep = mapping.get(ch)
            if rep is not None and rep != ch:
                raise TableError(
                    f"normalization is not idempotent: {src!r} -> {dst!r} "
                    f"but {ch!r} is remapped"
                )


@dataclass(frozen=True)
class CharClassTable:
    """Joining behaviour, digit set, and normalization map.

    Immutable; build via :meth:`default` or :func:`load_table`.
    """

    normalization: dict[str, str]
    digits: frozenset[str] = field(
        default=ASCII_DIGITS | PERSIAN_DIGITS | ARABIC_INDIC_DIGITS
    )

    def __post_init__(self):
        _validate_normalization(self.normalization)

    @classmethod
    def default(cls, unify_digits: bool = False) -> CharClassTable:
        """The shipped table; pass ``unify_digits=True`` to also map
        Arabic-Indic digits to Persian ones (off by default: corpus
        conventions vary)."""
        mapping = dict(_DEFAULT_NORMALIZATION)
        if unify_digits:
            mapping.update(_DIGIT_UNIFICATION)
        return cls(normalization=mapping)

    def classify_joiner(self, c: str) -> JoinerClass:
        cp = ord(c)
        if not _in_arabic_blocks(cp):
            return JoinerClass.NON_LETTER
        if unicodedata.category(c) not in ("Lo", "Lm"):
            return JoinerClass.NON_LETTER
        if c in _RIGHT_JOINING:
            return JoinerClass.RIGHT_JOINING_ONLY
        if c in _NON_JOINING:
            return JoinerClass.NON_JOINING
        return JoinerClass.DUAL_JOINING

    def is_joiner(self, c: str) -> bool:
        """True iff ``c`` connects to a following letter, i.e. a ZWNJ placed
        after it has a visual effect."""
        return self.classify_joiner(c) is JoinerClass.DUAL_JOINING

    def is_digit(self, c: str) -> bool:
        return c in self.digits

    def normalize(self, text: str) -> str:
        mapping = self.normalization
        mapped = "".join(mapping.get(ch, ch) for ch in text)
        return _collapse_separator_runs(mapped)


def _collapse_separator_runs(text: str) -> str:
    # A maximal run of SPACE/ZWNJ collapses to its first member.
    out: list[str] = []
    in_run = False
    for ch in text:
        if ch in SEPARATORS:
            if in_run:
                continue
            in_run = True
        else:
            in_run = False
        out.append(ch)
    return "".join(out)


_DEFAULT_TABLE = CharClassTable.default()


def default_table() -> CharClassTable:
    return _DEFAULT_TABLE


def classify_joiner(c: str, table: CharClassTable | None = None) -> JoinerClass:
    """Joining behaviour of one character. Total: any scalar value works."""
    return (table or _DEFAULT_TABLE).classify_joiner(c)


def is_joiner(c: str, table: CharClassTable | None = None) -> bool:
    return (table or _DEFAULT_TABLE).is_joiner(c)


def is_digit(c: str, table: CharClassTable | None = None) -> bool:
    return (table or _DEFAULT_TABLE).is_digit(c)


def normalize_text(s: str, table: CharClassTable | None = None) -> str:
    """Apply the normalization map and collapse separator runs.

    Idempotent; never turns a non-separator character into SPACE or ZWNJ.
    """
    return (table or _DEFAULT_TABLE).normalize(s)


def load_table(path) -> CharClassTable:
    """Read a normalization override file and return a table using it.

    Format: one mapping per line, ``<hex codepoint><TAB><replacement>``
    (empty replacement deletes the character); ``#`` starts a comment line.
    The file replaces the default normalization map entirely; joining data
    and the digit set are not overridable.
    """
    mapping: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if "\t" not in line:
                raise TableError(f"{path}:{lineno}: expected <hex><TAB><replacement>")
            code, replacement = line.split("\t", 1)
            try:
                src = chr(int(code.strip(), 16))
            except ValueError as exc:
                raise TableError(f"{path}:{lineno}: bad codepoint {code!r}") from exc
            mapping[src] = replacement
    return CharClassTable(normalization=mapping)
