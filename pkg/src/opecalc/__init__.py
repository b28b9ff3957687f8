"""Exact formal-distribution calculus and vertex-algebra identity checking."""

__version__ = "0.1.0"
