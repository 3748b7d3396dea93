"""Exact computations with general symmetric ideals generated in one degree."""

__version__ = "0.1.0"
