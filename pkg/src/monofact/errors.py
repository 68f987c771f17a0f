"""Shared error taxonomy.

Every failure mode that callers are expected to branch on gets its own class;
the CLI maps these onto its exit-code contract.
"""

from __future__ import annotations


class MonofactError(Exception):
    """Base class for all domain errors raised by this package."""


# --- ring -------------------------------------------------------------

class UnknownVariable(MonofactError):
    pass


class NonInvertibleLeadCoeff(MonofactError):
    pass


class ZeroInput(MonofactError):
    pass


class ModulusPresent(MonofactError):
    pass


class ArityMismatch(MonofactError):
    pass


class DimensionMismatch(MonofactError):
    pass


class RingMismatch(MonofactError):
    pass


class ParseError(MonofactError):
    """Bad polynomial or file syntax; carries line/col when known."""

    def __init__(self, message, line=None, col=None):
        super().__init__(message)
        self.line = line
        self.col = col


# --- solver -----------------------------------------------------------

class NoSolutionUpToDegree(MonofactError):
    """No solution within the degree bound.

    ``proven`` is True when the bound is provably sufficient (graded mode),
    so nonexistence is a theorem rather than a search failure.
    """

    def __init__(self, bound: int, proven: bool = False, detail: str = ""):
        msg = f"no solution up to degree {bound}"
        if proven:
            msg += " (proven: graded bound is sufficient)"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.bound = bound
        self.proven = proven


# --- mf ---------------------------------------------------------------

class NotAFactorization(MonofactError):
    pass


class OmegaZeroDivisor(MonofactError):
    pass


class OmegaMismatch(MonofactError):
    pass


class SquareFails(MonofactError):
    pass


class ObjectMismatch(MonofactError):
    pass


class UnsupportedOmega(MonofactError):
    pass


class GradingInconsistent(MonofactError):
    """Generator degree labels do not make the matrices homogeneous."""


# --- mon --------------------------------------------------------------

class NotInjective(MonofactError):
    pass


class CokernelNotAnnihilated(MonofactError):
    """g1.X = omega.I has no solution; carries the proven flag."""

    def __init__(self, message: str, proven: bool = False):
        super().__init__(message)
        self.proven = proven


class CompanionAssertFailed(MonofactError):
    """Internal consistency violation; must never fire on valid input."""


class NotExact(MonofactError):
    def __init__(self, level, reason):
        super().__init__(f"not exact at level {level}: {reason}")
        self.level = level
        self.reason = reason


class TermInvalid(MonofactError):
    def __init__(self, which, cause):
        super().__init__(f"term {which!r} invalid: {cause}")
        self.which = which
        self.cause = cause


class NotAnInflation(MonofactError):
    pass


class SourceMismatch(MonofactError):
    pass


# --- hypersurface -----------------------------------------------------

class NotMCM(MonofactError):
    def __init__(self, message: str, proven: bool = False):
        super().__init__(message)
        self.proven = proven


class NonSquare(MonofactError):
    pass


# --- cli --------------------------------------------------------------

class ValidationError(MonofactError):
    """File parsed but the payload failed the owning module's validator."""

    def __init__(self, cause: Exception):
        super().__init__(f"validation failed: {cause}")
        self.cause = cause
