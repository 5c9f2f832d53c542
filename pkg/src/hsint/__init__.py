"""Hasse-Schmidt derivations on plane curves over prime fields."""

__version__ = "0.1.0"
