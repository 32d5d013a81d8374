"""Enumeration and analysis of uniform neighborly oriented matroids."""
from .chirotope import Chirotope, alternating, simplex
from .kernels import BACKEND

__all__ = ["Chirotope", "alternating", "simplex", "BACKEND"]
__version__ = "0.1.0"
