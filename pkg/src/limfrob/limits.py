"""The graded limit at ``x = 0`` on the phi-lattice.

The V-filtration is given by the v-values ``v(e_k) = s_k / mu``; the graded
module carries the nilpotent operator ``N`` with matrix ``B`` and the limit
Frobenius type structure on a point ``([A0], [Ainf], g_lim)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from itertools import groupby

from .algebra.linalg import has_cyclic_vector, laurent_inverse, nilpotent_block_sizes
from .algebra.matrix import Matrix
from .algebra.poly import laurent
from .family import build_A0
from .spectrum import Spectrum, build_spectrum


class ConsistencyError(AssertionError):
    """A proven identity failed: this is a bug, not a property of the input."""


@dataclass(frozen=True)
class VGrading:
    v: tuple
    classes: tuple  # ((value, (indices...)), ...)


@dataclass
class LimitFTS:
    dimension: int
    R0: Matrix
    Rinf: Matrix
    g: Matrix
    weight: int

    @cached_property
    def g_inv(self) -> Matrix:
        return laurent_inverse(self.g)

    def adjoint(self, M: Matrix) -> Matrix:
        return self.g_inv @ M.T @ self.g


def _sp(w) -> Spectrum:
    return w if isinstance(w, Spectrum) else build_spectrum(w)


def v_filtration(w):
    sp = _sp(w)
    v = tuple(sk / sp.mu for sk in sp.s)
    classes = tuple((val, tuple(i for i, _ in grp))
                    for val, grp in groupby(enumerate(v), key=lambda t: t[1]))
    B = Matrix(sp.mu, sp.mu, {(i, i - 1): laurent(-1, 0, -1)
                              for i in range(1, sp.mu) if sp.s[i] == sp.s[i - 1]})
    return VGrading(v, classes), B


def jordan_data(w) -> list:
    """``[(alpha, block sizes)]`` for N on each graded piece, via ranks of powers."""
    grading, B = v_filtration(w)
    N = B.map(lambda p: p.coefficient(1, -1).constant_value())
    out = []
    for val, idx in grading.classes:
        sub = Matrix(len(idx), len(idx), {(a, b): N[i, j] for a, i in enumerate(idx)
                                          for b, j in enumerate(idx) if N[i, j]})
        out.append((val, nilpotent_block_sizes(sub)))
    return out


def limit_pairing(w) -> Matrix:
    sp = _sp(w)
    mu, n = sp.mu, sp.n
    ent = {(k, n - k): 1 for k in range(n + 1)}
    ent.update({(k, mu + n - k): 1 for k in range(n + 1, mu)})
    return Matrix(mu, mu, ent)


def limit_fts(w) -> LimitFTS:
    sp = _sp(w)
    mu, n = sp.mu, sp.n
    _, B = v_filtration(sp)
    th = laurent(1, 0, 1)
    R0 = B.scale(th * (-mu))
    if any(not p.is_constant() for _, p in R0.items()):
        raise ConsistencyError("theta does not cancel in -mu*theta*B")
    L = LimitFTS(mu, R0.to_rational(), Matrix.diag(sp.alpha), limit_pairing(sp), n)
    if L.adjoint(L.R0) != L.R0:
        raise ConsistencyError(f"[A0] is not self-adjoint for {sp.weights}")
    if L.Rinf + L.adjoint(L.Rinf) != Matrix.identity(mu).scale(n):
        raise ConsistencyError(f"[Ainf] duality fails for {sp.weights}")
    return L


def limit_identity_checks(L: LimitFTS):
    from .report import Check

    det_ok = abs(_perm_sign(L.g)) == 1
    return [
        Check("R0-self-adjoint", "limit-fts-R0", L.adjoint(L.R0) == L.R0),
        Check("Rinf-duality", "limit-fts-Rinf",
              L.Rinf + L.adjoint(L.Rinf) == Matrix.identity(L.dimension).scale(L.weight)),
        Check("g-unimodular", "limit-fts-metric", det_ok),
        Check("g-symmetric", "limit-fts-metric", L.g == L.g.T),
    ]


def _perm_sign(g: Matrix) -> int:
    """Determinant of a 0/1 matrix with one entry per row, else 0."""
    perm = {}
    for (i, j), v in g.items():
        if v != 1 or i in perm:
            return 0
        perm[i] = j
    if sorted(perm.values()) != list(range(g.nrows)) or len(perm) != g.nrows:
        return 0
    sign, seen = 1, set()
    for i in range(g.nrows):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def preprimitive_check(L: LimitFTS):
    """``(homogeneous, e0_preprimitive, any_preprimitive)``."""
    e0 = [Fraction(1)] + [Fraction(0)] * (L.dimension - 1)
    homogeneous = all(v == 0 for (i, j), v in L.Rinf.items() if j == 0 and i != 0)
    return homogeneous, has_cyclic_vector(L.R0, e0), has_cyclic_vector(L.R0)


@dataclass
class NongradedResult:
    is_fts: bool
    witness: tuple | None = None
    lhs: Fraction | None = None  # g(R0 e_a, e_b)
    rhs: Fraction | None = None  # g(e_a, R0 e_b)


def nongraded_counterexample(w) -> NongradedResult:
    """Replace ``[A0]`` by the x = 0 value of the phi matrix and test self-adjointness."""
    sp = _sp(w)
    R0 = build_A0(sp, "phi").poly_map("at_zero", 0).to_rational()
    g = limit_pairing(sp)
    left, right = R0.T @ g, g @ R0
    for a in range(sp.mu):
        for b in range(sp.mu):
            if left[a, b] != right[a, b]:
                return NongradedResult(False, (a, b), Fraction(left[a, b]), Fraction(right[a, b]))
    return NongradedResult(True)
