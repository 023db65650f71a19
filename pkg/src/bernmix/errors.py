"""Exception types shared across the package."""

__all__ = ["DegenerateDataError", "SelectionError", "HarnessError"]


class DegenerateDataError(ValueError):
    """The data carry no usable spread (e.g. all mass in one cell)."""


class SelectionError(RuntimeError):
    """Degree selection cannot proceed (e.g. a flat loglik profile)."""


class HarnessError(RuntimeError):
    """Too many replicate fits failed inside a simulation run."""
