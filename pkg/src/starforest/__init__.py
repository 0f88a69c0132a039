"""Exact constructions and searches for (plane) star-forest decompositions
of complete graphs."""

__version__ = "0.1.0"
