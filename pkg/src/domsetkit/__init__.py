"""Exact, parameterized and approximate algorithms for minimum dominating set."""

from .graph import Graph, is_dominating
from .oracle import brute_min_dominating

__all__ = ["Graph", "is_dominating", "brute_min_dominating"]
__version__ = "0.1.0"
