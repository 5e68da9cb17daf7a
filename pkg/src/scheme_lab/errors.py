"""Exception hierarchy shared by every module."""

from __future__ import annotations


class SchemeLabError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(SchemeLabError, ValueError):
    pass


class SingularMatrix(SchemeLabError, ValueError):
    pass


class IrrationalSpectrum(SchemeLabError):
    """Characteristic polynomial has a factor without rational roots.

    ``residual`` holds the unfactored remainder as integer coefficients,
    lowest degree first.
    """

    def __init__(self, residual, message: str | None = None):
        self.residual = list(residual)
        super().__init__(message or f"irrational spectrum; residual polynomial {self.residual}")


class ZeroLeadEntry(SchemeLabError):
    pass


class RepeatedEigenvalue(SchemeLabError):
    pass


class NotAScheme(SchemeLabError):
    """Relation products fail to be constant on some relation.

    ``pair`` is the offending (i, j) and ``cells`` two cells of the same
    relation where the product counts differ.
    """

    def __init__(self, message: str, pair=None, cells=None):
        self.pair = pair
        self.cells = cells
        super().__init__(message)


class UnsupportedDimension(SchemeLabError, ValueError):
    pass


class NoCutoffFound(SchemeLabError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"degree cutoff not certified below cap {cap}")


class NotASymmetricDesign(SchemeLabError, ValueError):
    pass


class NotAnSRGSpectrum(SchemeLabError, ValueError):
    pass


class FormSetUnavailable(SchemeLabError):
    pass


class NotRegular(SchemeLabError, ValueError):
    pass


class SymbolMismatch(SchemeLabError, ValueError):
    pass


class NotPrimePower(SchemeLabError, ValueError):
    pass


class NegativeCoefficient(SchemeLabError, ValueError):
    pass


class GuardViolated(SchemeLabError):
    pass


class NotMub(SchemeLabError):
    def __init__(self, beta1, beta2):
        self.witness = (beta1, beta2)
        super().__init__(f"not a MUB Gram matrix: coefficient magnitudes {beta1} and {beta2} differ")


class PreconditionFailed(SchemeLabError):
    pass


class NonIntegralParameter(SchemeLabError):
    def __init__(self, name: str, value):
        self.name = name
        self.value = value
        super().__init__(f"{name} = {value} is not a nonnegative integer")


class EmptyGraph(SchemeLabError, ValueError):
    pass


class NotClosed(SchemeLabError):
    def __init__(self, message: str, product=None):
        self.product = product
        super().__init__(message)


class DomainViolation(SchemeLabError, ValueError):
    pass


class InputError(SchemeLabError, ValueError):
    """Malformed input document; carries an optional line/column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
