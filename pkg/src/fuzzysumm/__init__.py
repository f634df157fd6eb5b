"""Fuzzy concept-summary hierarchies with flexible querying and repair."""

__version__ = "0.1.0"
