"""Nil-clean decompositions A = P + Q of matrices over GF(2)."""

__version__ = "0.1.0"
