"""Lattice, Clifford, modular-form and period-matrix tools for GKP codes."""

from .errors import GkpError, ValidationError

__version__ = "0.1.0"
__all__ = ["GkpError", "ValidationError", "__version__"]
