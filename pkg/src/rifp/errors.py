"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class CirquentError(Exception):
    """Base class. ``kind`` is a stable, machine-readable tag."""

    kind = "error"

    def __init__(self, message: str, kind: str | None = None):
        super().__init__(message)
        if kind is not None:
            self.kind = kind


class ParseError(CirquentError):
    kind = "syntax-error"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class PathError(CirquentError):
    kind = "path-out-of-range"


class RelabelError(CirquentError):
    """``kind`` is ``rank-mismatch`` or ``type-conflict``."""


class IllFormedError(CirquentError):
    kind = "ill-formed"


class SemanticsError(CirquentError):
    """``kind`` is ``missing-atom``, ``missing-rank`` or ``literal``."""


class CapExceeded(CirquentError):
    kind = "enumeration-cap-exceeded"


class RuleError(CirquentError):
    """``kind`` is one of ``schema-mismatch``, ``condition-violation``,
    ``ill-formed-result`` or ``fresh-ID-collision``."""


class ProofSyntaxError(CirquentError):
    kind = "syntax-error"

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SynthesisError(CirquentError):
    """A prescribed rule application was blocked or a measure failed to drop."""

    kind = "internal-invariant-violation"
