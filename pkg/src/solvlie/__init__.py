"""Exact computations with finite dimensional solvable Lie algebras."""

__version__ = "0.1.0"
