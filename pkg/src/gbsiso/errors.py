"""Exception hierarchy shared by every module."""

from __future__ import annotations


class GBSError(Exception):
    """Base class for all errors raised by gbsiso."""


class ValidationError(GBSError):
    """Raw graph data does not describe a labeled graph."""

    def __init__(self, message: str, element: object = None):
        super().__init__(message)
        self.element = element


class ZeroLabel(ValidationError):
    pass


class Disconnected(ValidationError):
    pass


class BadInvolution(ValidationError):
    pass


class ParseError(GBSError):
    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.field = field
        self.line = line


class NotAPath(GBSError):
    pass


class InvalidSlide(GBSError):
    pass


class InvalidInduction(GBSError):
    pass


class NotVirtualAscending(GBSError):
    pass


class BadConfiguration(GBSError):
    pass


class BettiTooLarge(GBSError):
    pass


class BettiZero(GBSError):
    pass


class BettiNotOne(GBSError):
    pass


class NotReduced(GBSError):
    pass


class PreferredEdgesRequireBettiOne(GBSError):
    pass


class Elementary(GBSError):
    pass


class HasMobileEdge(GBSError):
    pass


class NotAscending(GBSError):
    pass


class Ascending(GBSError):
    pass


class NonIntegralModulus(GBSError):
    pass


class MismatchedQ(GBSError):
    pass


class MismatchedArity(GBSError):
    pass


class UnitLabel(GBSError):
    pass


class EnumerationLimit(GBSError):
    """A search exceeded its configured state budget."""
