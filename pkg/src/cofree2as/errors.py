"""Exception types shared across the package."""


class ConsistencyError(RuntimeError):
    """An identity that must hold by construction failed; signals a bug or bad input data."""
