"""Exception types shared across the package."""


class FasegError(Exception):
    """Base class for all package errors."""


class CorpusFormatError(FasegError):
    """Malformed corpus input; carries the 1-based line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class EmptyCorpusError(FasegError):
    """An operation that needs at least one sentence got none."""


class InvalidSentenceError(FasegError):
    """Sentence violates the separator invariants (adjacent/leading/trailing)."""


class TagAlignmentError(FasegError):
    """Tag sequence does not line up with the non-separator characters."""


class TableError(FasegError):
    """Bad character table definition (file or invariant violation)."""


class ModelFormatError(FasegError):
    """Model file is corrupt, truncated, or from an unknown format version."""


class TrainingError(FasegError):
    """Training could not start or did not stay finite."""


class NumericError(FasegError):
    """Non-finite value in a numeric routine; names the offending sentence."""


class NotComparableError(FasegError):
    """Raw/gold pair differ in non-separator characters; use evaluate_external."""
