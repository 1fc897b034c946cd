"""Exact topological recursion and quantum curves on genus-0 spectral curves."""

__version__ = "0.1.0"
