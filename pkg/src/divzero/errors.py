"""Exception hierarchy."""

from __future__ import annotations


class DivzeroError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(DivzeroError, ValueError):
    """Operands live in different numbers of variables."""


class AxisError(DivzeroError, IndexError):
    """An axis index outside ``1..n``."""


class ExcludedExponentError(DivzeroError, ValueError):
    """A basis element was requested at an exponent the algebra excludes."""


class PreconditionError(DivzeroError, ValueError):
    """An operation was called outside its domain (zero input, i == j, ...)."""


class MembershipError(DivzeroError, ValueError):
    """A vector field is not in the algebra required by the operation.

    ``certificate`` is the offending graded component.
    """

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class NotRank1Error(DivzeroError, ValueError):
    """Generator values do not have the shape of a rank-one family member."""


class UnreachableError(DivzeroError, ValueError):
    """A basis element cannot be reached by bracket words within the bound."""
