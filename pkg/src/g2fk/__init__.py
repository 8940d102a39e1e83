"""Exact verification toolkit for the Sylow p-subgroup of G2(p)."""

__version__ = "0.1.0"

MAX_PRIME = 31


class ModelError(ValueError):
    """Raised when a model is asked for a prime it does not support."""
