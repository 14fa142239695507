"""Exception hierarchy shared by all ultrabase modules.

The split matters for the CLI exit-code contract: subclasses of
:class:`DomainError` mean "the input was readable but mathematically bad"
(exit 1), while :class:`UsageError` subclasses mean "the input could not
even be interpreted" (exit 2).
"""

from __future__ import annotations


class UltrabaseError(Exception):
    """Base class for every error raised by this package."""


class UsageError(UltrabaseError):
    """Malformed arguments or unreadable input (CLI exit code 2)."""


class UnknownLabelError(UsageError):
    def __init__(self, label: str):
        super().__init__(f"unknown point label {label!r}")
        self.label = label


class ParseError(UsageError):
    """Syntax error in a CSV or Newick document."""

    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line})"
        elif position is not None:
            loc = f" (offset {position})"
        super().__init__(message + loc)
        self.position = position
        self.line = line


class DomainError(UltrabaseError):
    """Well-formed input that violates a mathematical precondition (CLI exit code 1)."""


class UltrametricViolationError(DomainError):
    """A distance matrix failed validation; carries the full report."""

    def __init__(self, report):
        self.report = report
        first = report.violations[0].detail if report.violations else "unknown violation"
        extra = len(report.violations) - 1
        suffix = f" (+{extra} more)" if extra > 0 else ""
        super().__init__(f"not an ultrametric space: {first}{suffix}")


class NotGeneratorError(DomainError):
    """A landmark set fails to distinguish some pair of points."""

    def __init__(self, message: str, witness: tuple[str, str] | None = None):
        super().__init__(message)
        self.witness = witness


class NotBasisError(DomainError):
    """A landmark set is not a metric basis (not a generator, or not minimal)."""

    def __init__(self, message: str, witness: tuple[str, str] | None = None):
        super().__init__(message)
        self.witness = witness


class CoordinateTableError(DomainError):
    """A coordinate table cannot come from any ultrametric space."""


class InternalInvariantError(UltrabaseError):
    """A theorem-guaranteed invariant failed at runtime; indicates a bug, not bad input."""
