"""Exact checks for the logarithmic Frobenius structure of the family
``F = u_1 + ... + u_n + x / (u_1^w_1 ... u_n^w_n)`` near ``x = 0``."""

__version__ = "0.1.0"
