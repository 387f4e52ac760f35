"""Meromorphic connections in the variables (theta, x).

A connection is stored through its matrices in a basis ``e``:
``nabla e = e * (omega_theta dtheta + omega_x dx)``.  Entries are Laurent
polynomials in the ring (x, theta).  A form may be *ramified*: then the
ring variable is ``y`` with ``x = y**ramification`` and ``omega_x`` holds the
coefficient of ``dy``; this keeps fractional powers of ``x`` out of the
polynomial arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .algebra.linalg import char_poly, lambda_coefficients, laurent_inverse
from .algebra.matrix import Matrix
from .algebra.poly import THETA_VAR, X_VAR, Poly
from .report import Check

BASES = ("omega", "phi", "psi", "flat")


@dataclass
class ConnectionForm:
    size: int
    omega_theta: Matrix
    omega_x: Matrix
    basis: str = "omega"
    ramification: int = 1

    def log_x_matrix(self) -> Matrix:
        """Matrix of ``x * nabla_{d/dx}``."""
        x = Poly.monomial(1, (1, 0))
        M = self.omega_x.map(lambda v: v * x)
        return M / self.ramification if self.ramification != 1 else M


@dataclass(eq=False)
class Pairing:
    """Matrix of the theta^weight coefficient of the pairing in a basis."""

    size: int
    G: Matrix
    weight: int
    basis: str = "omega"
    ramification: int = 1

    @cached_property
    def G_inv(self) -> Matrix:
        return laurent_inverse(self.G)

    def is_symmetric(self) -> bool:
        return self.G == self.G.T


@dataclass
class RationalExponentMatrix:
    """Square matrix whose entries are monomials ``c * x**e`` with rational ``e``."""

    size: int
    entries: dict = field(default_factory=dict)  # (i, j) -> (coeff, exponent)

    def exponents(self):
        return {k: e for k, (_, e) in self.entries.items()}

    def common_denominator(self) -> int:
        d = 1
        for _, e in self.entries.values():
            d = d * e.denominator // _gcd(d, e.denominator)
        return d

    def ramified(self, r: int) -> Matrix:
        """Entries as Laurent monomials in ``y`` where ``x = y**r``."""
        out = {}
        for k, (c, e) in self.entries.items():
            ey = e * r
            if ey.denominator != 1:
                raise ValueError(f"exponent {e} is not integral after x = y^{r}")
            out[k] = Poly.monomial(c, (int(ey), 0))
        return Matrix(self.size, self.size, out)

    def limit_at_zero(self) -> Matrix:
        if any(e < 0 for _, e in self.entries.values()):
            raise ValueError("no limit: negative exponent")
        return Matrix(self.size, self.size,
                      {k: c for k, (c, e) in self.entries.items() if e == 0})


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------

def _diag_monomials(D: Matrix):
    if not D.is_square() or not D.is_diagonal():
        raise ValueError("gauge matrix must be diagonal")
    out = []
    for i in range(D.nrows):
        v = D[i, i]
        if not isinstance(v, Poly):
            if v == 0:
                raise ValueError("gauge matrix must be invertible")
            v = Poly.const(v, 2)
        if not v.is_monomial() or v.depends_on(THETA_VAR):
            raise ValueError(f"gauge entry {v} is not a monomial in x")
        out.append(v)
    return out


def gauge_transform(C: ConnectionForm, D: Matrix, basis: str | None = None) -> ConnectionForm:
    """Connection matrices in the basis ``e * D`` for a diagonal monomial ``D``."""
    d = _diag_monomials(D)
    if len(d) != C.size:
        raise ValueError("dimension mismatch")

    def conj(M):
        return Matrix(M.nrows, M.ncols, {(i, j): v * d[j] / d[i] for (i, j), v in M.items()})

    dlog = Matrix.diag([di.diff(X_VAR) / di for di in d])
    return ConnectionForm(C.size, conj(C.omega_theta), conj(C.omega_x) + dlog,
                          basis or C.basis, C.ramification)


def ramify(C: ConnectionForm, r: int) -> ConnectionForm:
    """Pull back along ``x = y**r``."""
    sub = lambda M: M.poly_map("subs_power", X_VAR, r)  # noqa: E731
    jac = Poly.monomial(r, (r - 1, 0))
    return ConnectionForm(C.size, sub(C.omega_theta), sub(C.omega_x).scale(jac),
                          C.basis, C.ramification * r)


def curvature(C: ConnectionForm) -> Matrix:
    """Coefficient of dtheta ^ dx in the curvature."""
    Wt, Wx = C.omega_theta, C.omega_x
    return (Wx.poly_map("diff", THETA_VAR) - Wt.poly_map("diff", X_VAR)
            + Wt.commutator(Wx))


def is_flat(C: ConnectionForm) -> bool:
    return curvature(C).is_zero()


def theta_components(M: Matrix) -> dict:
    """Split a Laurent matrix by powers of theta: ``{k: coefficient matrix}``."""
    ks = {e[THETA_VAR] for _, v in M.items() if isinstance(v, Poly) for e in v.terms}
    if any(not isinstance(v, Poly) for _, v in M.items()):
        ks.add(0)
    return {k: _theta_coeff(M, k) for k in sorted(ks)}


# ---------------------------------------------------------------------------

@dataclass
class ResidueResult:
    matrix: Matrix
    char_poly: Poly
    eigenvalues: list | None
    theta_free: bool
    acyclic: bool
    order: list | None = None

    def in_range(self, lo, hi, closed_lo: bool, closed_hi: bool) -> bool | None:
        if self.eigenvalues is None:
            return None
        def ok(v):
            a = v >= lo if closed_lo else v > lo
            b = v <= hi if closed_hi else v < hi
            return a and b
        return all(ok(v) for v in self.eigenvalues)


def _topological_order(M: Matrix):
    n = M.nrows
    succ = {i: set() for i in range(n)}
    indeg = [0] * n
    for (i, j) in M.nonzero():
        if i != j and i not in succ[j]:
            succ[j].add(i)
            indeg[i] += 1
    order = []
    ready = sorted(i for i in range(n) if indeg[i] == 0)
    while ready:
        j = ready.pop(0)
        order.append(j)
        for i in sorted(succ[j]):
            indeg[i] -= 1
            if indeg[i] == 0:
                ready.append(i)
        ready.sort()
    return order if len(order) == n else None


def _rational_roots(coeffs):
    """Rational roots with multiplicity of a univariate polynomial over Q,
    or None when some root is irrational."""
    import sympy

    lam = sympy.Symbol("lam")
    p = sum(sympy.Rational(c.numerator, c.denominator) * lam ** k for k, c in enumerate(coeffs))
    roots = sympy.roots(sympy.Poly(p, lam), filter="Q")
    if sum(roots.values()) != len(coeffs) - 1:
        return None
    out = []
    for r, m in roots.items():
        out.extend([Fraction(int(r.p), int(r.q))] * m)
    return sorted(out)


def triangular_char_poly(M: Matrix) -> Poly:
    """``det(lam - M)`` for M triangular up to a permutation: product over the diagonal."""
    lam = Poly.gen(2, 3)
    out = Poly.const(1, 3)
    for i in range(M.nrows):
        v = M[i, i]
        out = out * (lam - (v.extend(3) if isinstance(v, Poly) else v))
    return out


def residue_x(C: ConnectionForm) -> ResidueResult:
    L = C.log_x_matrix()
    for _, v in L.items():
        if isinstance(v, Poly) and v.min_exponent(X_VAR) < 0:
            raise ValueError("omega_x has a pole of order >= 2 along x = 0")
    res = L.poly_map("at_zero", X_VAR)
    order = _topological_order(res)
    cp = triangular_char_poly(res) if order is not None else char_poly(res)
    theta_free = not any(e[THETA_VAR] for e in cp.terms)
    eig = None
    if order is not None:
        diag = [res[i, i] for i in order]
        if all(not isinstance(v, Poly) or v.is_constant() for v in diag):
            eig = sorted(v.constant_value() if isinstance(v, Poly) else Fraction(v) for v in diag)
    elif theta_free:
        coeffs = [c.constant_value() for c in lambda_coefficients(cp)]
        eig = _rational_roots(coeffs)
    return ResidueResult(res, cp, eig, theta_free, order is not None, order)


# ---------------------------------------------------------------------------

def _theta_coeff(M: Matrix, k: int) -> Matrix:
    return M.map(lambda v: v.coefficient(THETA_VAR, k) if isinstance(v, Poly) else (v if k == 0 else 0))


def pairing_flat_check(C: ConnectionForm, P: Pairing) -> list[Check]:
    if C.basis != P.basis or C.ramification != P.ramification:
        raise ValueError(f"basis mismatch: connection in {C.basis}, pairing in {P.basis}")
    G = P.G
    n = P.weight
    L = C.log_x_matrix()
    R = _theta_coeff(L, 0)
    A0 = _theta_coeff(C.omega_theta, -2)
    Ainf = _theta_coeff(C.omega_theta, -1)
    xdG = G.poly_map("log_diff", X_VAR) / C.ramification
    checks = [
        Check("pairing-x-derivative", "pairing-flat-x", xdG == R.T @ G + G @ R),
        Check("A0-self-adjoint", "pairing-adjoint-A0", A0.T @ G == G @ A0),
        Check("Ainf-duality", "pairing-adjoint-Ainf", Ainf.T @ G + G @ Ainf == G.scale(n)),
    ]
    return checks


def flat_basis_conjugation(A0: Matrix, R: Matrix):
    """``x^R * A0(x) * x^-R`` with entry (i, j) scaled by ``x^(R_ii - R_jj)``.

    Returns the conjugated matrix and whether its limit at ``x = 0`` exists.
    """
    if not R.is_diagonal():
        raise ValueError("R must be diagonal")
    r = [R[i, i] for i in range(R.nrows)]
    r = [v.constant_value() if isinstance(v, Poly) else Fraction(v) for v in r]
    out = {}
    for (i, j), v in A0.items():
        if isinstance(v, Poly):
            if not v.is_monomial() or v.depends_on(THETA_VAR):
                raise ValueError(f"entry ({i},{j}) = {v} is not a monomial in x")
            (e, c), = v.terms.items()
            xe = e[X_VAR]
        else:
            c, xe = Fraction(v), 0
        out[i, j] = (c, Fraction(xe) + r[i] - r[j])
    M = RationalExponentMatrix(A0.nrows, out)
    return M, all(e >= 0 for _, e in out.values())
