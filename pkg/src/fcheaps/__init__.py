"""Heaps of fully commutative elements, boundary complexes and the generalized
Temperley-Lieb algebra."""

__version__ = "0.1.0"
