"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes, so keep the split stable:
parse errors (2), validation errors (3), certificate violations (4),
statistical gate failures (5).
"""

from __future__ import annotations


class CantorMeasureError(Exception):
    """Base class for all package errors."""


class ParseError(CantorMeasureError):
    def __init__(self, message: str, line: int = 1, col: int = 0):
        super().__init__(f"{message} (line {line}, col {col})")
        self.line = line
        self.col = col


class ValidationError(CantorMeasureError):
    """Structural precondition failed (bad input, not a broken certificate)."""


class CertificateError(CantorMeasureError):
    """An exact arithmetic check refuted a claimed certificate."""


class BudgetError(CertificateError):
    """A measure budget was exceeded at some (level, stage)."""


class StatisticalGateError(CantorMeasureError):
    """A sampling run tripped a statistical sanity gate."""
