"""Exception and warning types shared across the package."""

from __future__ import annotations


class HdxError(Exception):
    """Base class for all errors raised by this package."""


class EmptyInput(HdxError):
    pass


class MixedDimensions(HdxError):
    """Facet list contains facets of different sizes."""


class BadDimension(HdxError):
    pass


class BadParameter(HdxError):
    pass


class NotACell(HdxError):
    pass


class DimensionMismatch(HdxError):
    pass


class TopDimension(HdxError):
    """Coboundary requested above the top dimension."""


class ResourceLimit(HdxError):
    """A configured size cap would be exceeded."""


class CapExceeded(ResourceLimit):
    """Dense eigensolver cap exceeded."""


class ThresholdExceeded(ResourceLimit):
    """Exact enumeration would exceed the configured threshold."""


class BudgetExceeded(HdxError):
    """Heuristic search budget too small to produce any result."""


class NotAnnotated(HdxError):
    """Operation needs subspace/color annotations the complex does not carry."""


class NotBiRegular(HdxError):
    pass


class InputFormatError(HdxError):
    """Malformed input file; carries a line number for diagnostics."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NonHomogeneousWarning(UserWarning):
    """Norm bounds that assume homogeneity are not certified for this input."""
