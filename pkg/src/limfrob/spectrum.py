"""The spectrum multiset attached to a weight vector.

For weights ``w = (w_1, ..., w_n)`` put ``w_0 = 1`` and ``mu = 1 + sum(w)``.
The multiset ``S_w`` is the disjoint union over ``i = 0..n`` of
``{l * mu / w_i : 0 <= l < w_i}``; sorted, it gives ``s_0 <= ... <= s_{mu-1}``
and the spectrum at infinity ``alpha_k = k - s_k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby

from .report import Check


def validate_weights(w) -> tuple:
    w = tuple(w)
    if not w:
        raise ValueError("weight vector must be non-empty")
    for wi in w:
        if isinstance(wi, bool) or not isinstance(wi, int):
            raise TypeError(f"weights must be integers, got {wi!r}")
        if wi <= 0:
            raise ValueError(f"weights must be positive, got {wi}")
    return w


@dataclass(frozen=True)
class Spectrum:
    weights: tuple
    mu: int
    s: tuple
    alpha: tuple
    runs: tuple

    @property
    def n(self) -> int:
        return len(self.weights)


def constant_runs_of(values) -> tuple:
    return tuple((v, len(list(g))) for v, g in groupby(values))


def build_spectrum(w) -> Spectrum:
    w = validate_weights(w)
    mu = 1 + sum(w)
    s = sorted(Fraction(l * mu, wi) for wi in (1,) + w for l in range(wi))
    alpha = tuple(k - sk for k, sk in enumerate(s))
    return Spectrum(w, mu, tuple(s), alpha, constant_runs_of(s))


def constant_runs(sp: Spectrum) -> list:
    """Maximal runs ``(value, length)`` of equal s-values, in order."""
    return list(constant_runs_of(sp.s))


def check_spectrum_symmetries(sp: Spectrum) -> list[Check]:
    mu, n, s, a = sp.mu, sp.n, sp.s, sp.alpha
    checks = []

    def add(name, anchor, bad_indices):
        bad = next(iter(bad_indices), None)
        checks.append(Check(name, anchor, bad is None,
                            "" if bad is None else f"fails at index {bad}"))

    add("cardinality", "spectrum-size", [] if len(s) == mu else [len(s)])
    add("s-sorted", "spectrum-order",
        (k for k in range(mu - 1) if s[k] > s[k + 1]))
    add("s-over-mu-in-unit-interval", "spectrum-range",
        (k for k in range(mu) if not (0 <= s[k] / mu < 1)))
    add("s-initial-zeros", "spectrum-initial-zeros",
        (k for k in range(n + 1) if s[k] != 0))
    add("s-first-positive", "spectrum-first-positive",
        [] if mu == n + 1 or s[n + 1] == Fraction(mu, max(sp.weights)) else [n + 1])
    add("s-symmetry", "spectrum-symmetry",
        (k for k in range(n + 1, mu) if s[k] + s[mu + n - k] != mu))
    add("alpha-initial", "alpha-initial",
        (k for k in range(n + 1) if a[k] != k))
    add("alpha-step-bound", "alpha-step-bound",
        (k for k in range(mu - 1) if a[k + 1] > a[k] + 1))
    add("alpha-symmetry-high", "alpha-symmetry",
        (k for k in range(n + 1, mu) if a[k] + a[mu + n - k] != n))
    add("alpha-symmetry-low", "alpha-symmetry",
        (k for k in range(n + 1) if a[k] + a[n - k] != n))
    add("runs-cover", "spectrum-runs",
        [] if sum(length for _, length in sp.runs) == mu else [0])
    return checks
