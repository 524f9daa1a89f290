"""Shortest vectors and traveling-salesman bounds for 2D modular lattices and Kronecker sets."""

__version__ = "0.1.0"
