"""Exact and certified tools for exponents of Diophantine approximation."""

from .errors import DiophError
from .numeric import INF, Interval

__all__ = ["DiophError", "INF", "Interval"]
__version__ = "0.1.0"
