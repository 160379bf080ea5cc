"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` and the process exit
status the command-line front end should use for it.
"""

from __future__ import annotations


class JcmapError(Exception):
    code = "error"
    exit_status = 2

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class InvalidNameError(JcmapError, ValueError):
    code = "invalid-name"


class FormatError(JcmapError, ValueError):
    code = "format-error"


class ParseError(JcmapError, ValueError):
    code = "parse-error"

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["line"] = self.line
        return d


class EmptyEnvironmentError(JcmapError):
    code = "empty-environment"


class DegenerateEnvironmentError(JcmapError):
    code = "degenerate-environment"


class UnknownJournalError(JcmapError, KeyError):
    code = "unknown-journal"

    def __str__(self) -> str:  # KeyError would repr() the message
        return self.args[0] if self.args else ""


class ContractError(JcmapError, ValueError):
    """Raised when a numerical routine receives input violating its contract."""

    code = "contract-violation"
    exit_status = 3


class NumericalError(JcmapError, ArithmeticError):
    code = "numerical-failure"
    exit_status = 3


class TooFewPointsError(NumericalError):
    code = "too-few-points"


class UndefinedStressError(NumericalError):
    code = "undefined-stress"


class InsufficientDataError(NumericalError):
    code = "insufficient-data"


class DivergentExponentError(NumericalError):
    code = "divergent-exponent"


class UndefinedSkewnessError(NumericalError):
    code = "undefined-skewness"
