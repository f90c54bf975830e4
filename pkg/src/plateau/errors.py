"""Exception types shared across the package."""


class InternalCheckError(RuntimeError):
    """A cross-checked identity failed; signals an arithmetic bug, not bad input."""


class FileFormatError(ValueError):
    """A function-table file could not be parsed."""


class ConstructionError(ValueError):
    """A construction hypothesis is violated at build time."""


class BudgetError(RuntimeError):
    """A requested computation exceeds the configured resource budget."""
