"""Exact Laurent-polynomial matrices over Q."""

from .matrix import Matrix
from .poly import THETA, THETA_VAR, X, X_VAR, Poly, laurent

__all__ = ["Matrix", "Poly", "laurent", "X", "THETA", "X_VAR", "THETA_VAR"]
