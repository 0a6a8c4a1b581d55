"""Exception hierarchy shared by every actlab module."""

from __future__ import annotations


class ActlabError(Exception):
    """Base class for all actlab errors."""


class ParseError(ActlabError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}"
            if col is not None:
                where += f", col {col}"
            where += ": "
        super().__init__(where + message)


# --- monoid core -----------------------------------------------------------

class OutOfRange(ActlabError):
    pass


class NonAssociative(ActlabError):
    def __init__(self, s: int, t: int, u: int):
        self.triple = (s, t, u)
        super().__init__(f"(s*t)*u != s*(t*u) for (s, t, u) = {self.triple}")


class NoIdentity(ActlabError):
    pass


class NotIdempotent(ActlabError):
    pass


class IdealNotMinimal(ActlabError):
    pass


class NotAGroup(ActlabError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class NotSubsemigroup(ActlabError):
    def __init__(self, s: int, t: int):
        self.witness = (s, t)
        super().__init__(f"product of {s} and {t} leaves the subset")


class NotABand(ActlabError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class JNotSingleton(ActlabError):
    pass


class NotInBand(ActlabError):
    pass


# --- acts -------------------------------------------------------------------

class ActionLawViolated(ActlabError):
    def __init__(self, s: int, t: int, a: int):
        self.witness = (s, t, a)
        super().__init__(f"(s*t).a != s.(t.a) for (s, t, a) = {self.witness}")


class IdentityLawViolated(ActlabError):
    def __init__(self, a: int):
        self.point = a
        super().__init__(f"1.a != a for a = {a}")


class MonoidMismatch(ActlabError):
    pass


# --- regularity -------------------------------------------------------------

class NotRegular(ActlabError):
    def __init__(self, point: int):
        self.point = point
        super().__init__(f"point {point} is not act-regular")


class PreconditionFailed(ActlabError):
    def __init__(self, which: str, detail: str = ""):
        self.which = which
        super().__init__(f"{which}: {detail}" if detail else which)


class REmptyError(ActlabError):
    pass


# --- formulas ---------------------------------------------------------------

class UnboundVariable(ActlabError):
    pass


class ArityMismatch(ActlabError):
    pass


# --- witnesses --------------------------------------------------------------

class IdealsComparable(PreconditionFailed):
    def __init__(self, detail: str = ""):
        super().__init__("IdealsComparable", detail)


class ChainNotStrict(PreconditionFailed):
    def __init__(self, detail: str = ""):
        super().__init__("ChainNotStrict", detail)


class PatternViolated(ActlabError):
    """A proof-guaranteed pattern failed: this signals a bug, not a result."""

    def __init__(self, where, detail: str = ""):
        self.where = where
        super().__init__(f"pattern violated at {where}" + (f": {detail}" if detail else ""))


class SeparationViolated(PatternViolated):
    pass


class NoCoverIdempotentApplies(ActlabError):
    pass


# --- families ---------------------------------------------------------------

class GNotGroup(ActlabError):
    pass


class GNotAbelian(ActlabError):
    pass


class LengthInsufficient(ActlabError):
    pass


class TableInconsistent(ActlabError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class UnknownFamily(ActlabError):
    pass


class WindowTooSmall(ActlabError):
    pass


class OracleInvalid(ActlabError):
    pass
