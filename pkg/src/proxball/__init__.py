"""Balls inside the complement of sets satisfying an extended exterior sphere condition."""

__version__ = "0.1.0"
