"""High-precision sequence transformations for the Euler series."""

from .numerics import PrecisionContext, from_polar, make_context, principal_power

__all__ = ["PrecisionContext", "make_context", "from_polar", "principal_power"]
__version__ = "0.1.0"
