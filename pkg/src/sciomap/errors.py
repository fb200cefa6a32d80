"""Exception types raised across the toolkit."""


class SciomapError(Exception):
    """Base class for every error this package raises on bad input."""


class DuplicateLabel(SciomapError):
    """Two labels collide after normalization (registry or matrix header)."""


class MalformedRow(SciomapError):
    """A data row that cannot be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class EmptyExport(SciomapError):
    """An analyze export with no data rows at all."""


class UnknownLabel(SciomapError):
    """A category label that does not match any registry entry."""


class MissingLabel(SciomapError):
    """Registry entries that a matrix or partition file does not cover."""


class NotSquare(SciomapError):
    """A citation matrix whose rows and columns do not line up."""


class NegativeCell(SciomapError):
    """A citation matrix cell below zero."""


class AllUnmatched(SciomapError):
    """No export row matched the registry; usually a category-scheme mismatch."""


class RegistryMismatch(SciomapError):
    """An overlay and a base map built against different registries."""


class DimensionMismatch(SciomapError):
    """Vector/matrix sizes that do not agree."""
