"""Frobenius type structures: axiom checking, the limit Frobenius manifold
for ``mu = n + 1`` and the logarithmic section tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product

from .algebra.linalg import laurent_inverse, rank
from .algebra.matrix import Matrix
from .algebra.poly import X_VAR, Poly
from .connection import _theta_coeff
from .family import build_A0, build_Ainf, build_R, build_connection, build_pairing
from .limits import limit_fts
from .report import Check
from .spectrum import build_spectrum


@dataclass
class FTSData:
    """Matrices of a Frobenius type structure over a parameter ring.

    ``variables[i]`` is the ring variable of the i-th parameter; when
    ``log_flags[i]`` is set the direction is ``x d/dx`` (divided by
    ``ramification`` if the ring variable is ``y`` with ``x = y**r``).
    ``Nabla[i]`` is the matrix of the connection along that direction.
    """

    m: int
    R0: Matrix
    Rinf: Matrix
    Phi: list
    g: Matrix
    r: Fraction
    Nabla: list = None
    log_flags: list = None
    variables: list = None
    ramification: int = 1

    def __post_init__(self):
        size = self.R0.nrows
        if self.Nabla is None:
            self.Nabla = [Matrix.zeros(size) for _ in range(self.m)]
        if self.log_flags is None:
            self.log_flags = [False] * self.m
        if self.variables is None:
            self.variables = list(range(self.m))
        mats = [self.R0, self.Rinf, self.g, *self.Phi, *self.Nabla]
        if any(M.shape != (size, size) for M in mats):
            raise ValueError("FTS matrices have inconsistent sizes")
        if not (len(self.Phi) == len(self.Nabla) == len(self.log_flags)
                == len(self.variables) == self.m):
            raise ValueError(f"expected {self.m} Higgs, connection and direction entries")

    @property
    def size(self) -> int:
        return self.R0.nrows

    def derive(self, i: int, M: Matrix) -> Matrix:
        var = self.variables[i]
        if self.log_flags[i]:
            D = M.poly_map("log_diff", var)
            return D / self.ramification if self.ramification != 1 else D
        return M.poly_map("diff", var)

    def nabla(self, i: int, M: Matrix) -> Matrix:
        return self.derive(i, M) + self.Nabla[i].commutator(M)


def fts_axiom_check(F: FTSData) -> list[Check]:
    g = F.g
    g_inv = laurent_inverse(g) if any(isinstance(v, Poly) for _, v in g.items()) \
        else _rational_inverse(g)

    def adj(M):
        return g_inv @ M.T @ g

    rng = range(F.m)
    pairs = [(i, j) for i in rng for j in rng if i < j]
    ident = Matrix.identity(F.size).scale(F.r)

    def every(name, anchor, bad):
        bad = list(bad)
        return Check(name, anchor, not bad, f"fails for direction(s) {bad[0]}" if bad else "")

    return [
        every("connection-flat", "fts-flat-connection",
              ((i, j) for i, j in pairs
               if not (F.derive(i, F.Nabla[j]) - F.derive(j, F.Nabla[i])
                       + F.Nabla[i].commutator(F.Nabla[j])).is_zero())),
        every("higgs-commute", "fts-higgs-commute",
              ((i, j) for i, j in pairs if not F.Phi[i].commutator(F.Phi[j]).is_zero())),
        every("higgs-closed", "fts-higgs-closed",
              ((i, j) for i, j in pairs
               if F.nabla(i, F.Phi[j]) != F.nabla(j, F.Phi[i]))),
        every("R0-higgs-commute", "fts-R0-higgs",
              (i for i in rng if not F.R0.commutator(F.Phi[i]).is_zero())),
        every("R0-higgs-Rinf", "fts-R0-Rinf-relation",
              (i for i in rng
               if F.nabla(i, F.R0) + F.Phi[i] != F.Phi[i].commutator(F.Rinf))),
        every("Rinf-flat", "fts-Rinf-flat",
              (i for i in rng if not F.nabla(i, F.Rinf).is_zero())),
        every("metric-flat", "fts-metric-flat",
              (i for i in rng
               if F.derive(i, g) != F.Nabla[i].T @ g + g @ F.Nabla[i])),
        every("higgs-self-adjoint", "fts-higgs-adjoint",
              (i for i in rng if adj(F.Phi[i]) != F.Phi[i])),
        Check("R0-self-adjoint", "fts-R0-adjoint", adj(F.R0) == F.R0),
        Check("Rinf-duality", "fts-Rinf-adjoint", F.Rinf + adj(F.Rinf) == ident),
    ]


def _rational_inverse(g: Matrix) -> Matrix:
    from .algebra.linalg import solve_inverse

    return solve_inverse(g)


def family_fts(w, basis: str = "omega") -> FTSData:
    """One-parameter logarithmic FTS read off the connection matrices.

    ``R0 = A0``, ``Phi = -A0/mu`` (the theta^-1 part of the x d/dx matrix),
    the theta^0 part is the connection, ``Rinf = n - Ainf`` and ``r = n``.
    """
    C = build_connection(w, basis)
    P = build_pairing(w, basis)
    n = P.weight
    L = C.log_x_matrix()
    A0 = _theta_coeff(C.omega_theta, -2)
    Ainf = _theta_coeff(C.omega_theta, -1).to_rational()
    return FTSData(1, A0, Matrix.identity(C.size).scale(n) - Ainf,
                   [_theta_coeff(L, -1)], P.G, Fraction(n),
                   Nabla=[_theta_coeff(L, 0)], log_flags=[True], variables=[X_VAR],
                   ramification=C.ramification)


# ---------------------------------------------------------------------------
# limit Frobenius manifold, mu = n + 1

@dataclass
class FrobeniusData:
    n: int
    mu: int
    C: list
    A0tilde: Matrix
    Ainf: Matrix
    g: Matrix
    potential: Poly
    euler: list
    product: list  # product[i][j] = coefficient vector of d_i * d_j (0-based)

    def var_names(self):
        return [f"x{i + 1}" for i in range(self.mu)]


def _J(mu: int) -> Matrix:
    return Matrix(mu, mu, {(k + 1, k): 1 for k in range(mu - 1)})


def _gens(mu):
    return [Poly.gen(i, mu) for i in range(mu)]


def limit_manifold(n: int) -> FrobeniusData:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    mu = n + 1
    J = _J(mu)
    C = [-(J ** (i)) for i in range(mu)]
    x = _gens(mu)
    # Euler field coefficients: x1, mu, -x3, -2 x4, ...
    euler = [x[0], Poly.const(mu, mu)] + [x[i] * (-(i - 1)) for i in range(2, mu)]
    A0 = Matrix.zeros(mu)
    for i in range(mu):
        A0 = A0 - C[i].scale(euler[i])
    g = Matrix(mu, mu, {(i, n - i): 1 for i in range(mu)})
    psi = Poly(mu)
    for i, j, k in combinations_with_replacement(range(mu), 3):
        if i + j + k + 3 == mu + 2:
            psi = psi + x[i] * x[j] * x[k] * Fraction(1, _automorphisms(i, j, k))
    # product from the Higgs field: phi(d_i * d_j) = C_i C_j e_0, phi(d_k) = -C_k e_0 = e_k
    e0 = [Fraction(1)] + [Fraction(0)] * (mu - 1)
    prod_table = [[tuple(Fraction(v) for v in (C[i] @ C[j]).apply(e0)) for j in range(mu)]
                  for i in range(mu)]
    return FrobeniusData(n, mu, C, A0, Matrix.diag(range(mu)), g, psi, euler, prod_table)


def _automorphisms(i, j, k) -> int:
    distinct = len({i, j, k})
    return {3: 1, 2: 2, 1: 6}[distinct]


def manifold_fts(F: FrobeniusData) -> FTSData:
    return FTSData(F.mu, F.A0tilde, Matrix.identity(F.mu).scale(F.n) - F.Ainf,
                   list(F.C), F.g, Fraction(F.n))


def structure_constant_checks(F: FrobeniusData) -> list[Check]:
    mu = F.mu
    rng = range(mu)
    L = limit_fts((1,) * F.n)
    J = _J(mu)
    A0_at_0 = F.A0tilde.poly_map("evaluate", (0,) * mu).to_rational()
    dC = lambda i, j: F.C[i].poly_map("diff", j)  # noqa: E731

    def poly_in_J(col):
        out = Matrix.zeros(mu)
        for k, c in enumerate(col):
            out = out + (J ** k).scale(c)
        return out

    checks = [
        Check("C-closed", "deformation-closed",
              all(dC(i, j) == dC(j, i) for i in rng for j in rng)),
        Check("C-commute", "deformation-commute",
              all(F.C[i].commutator(F.C[j]).is_zero() for i in rng for j in rng)),
        Check("A0-C-commute", "deformation-A0-commute",
              all(F.A0tilde.commutator(F.C[i]).is_zero() for i in rng)),
        Check("A0-derivative", "deformation-A0-derivative",
              all(F.A0tilde.poly_map("diff", i) + F.C[i] == F.Ainf.commutator(F.C[i])
                  for i in rng)),
        Check("A0-initial", "deformation-initial", A0_at_0 == L.R0),
        Check("C-first-column", "deformation-normalisation",
              all(F.C[i][i, 0] == -1 and all(F.C[i][k, 0] == 0 for k in rng if k != i)
                  for i in rng)),
        Check("C-unit", "deformation-unit", F.C[0] == -Matrix.identity(mu)),
        Check("C-unique-from-first-column", "deformation-uniqueness",
              all(F.C[i].commutator(A0_at_0).is_zero()
                  and F.C[i] == poly_in_J(F.C[i].column(0)) for i in rng)),
    ]
    return checks


def third_derivatives(F: FrobeniusData) -> dict:
    out = {}
    for i, j, k in combinations_with_replacement(range(F.mu), 3):
        out[i, j, k] = F.potential.diff(i).diff(j).diff(k).constant_value()
    return out


def product_from_potential(F: FrobeniusData) -> list:
    """``d_i * d_j = sum_k c_ijk g^{kl} d_l``."""
    c = third_derivatives(F)
    ginv = _rational_inverse(F.g)
    mu = F.mu
    table = []
    for i in range(mu):
        row = []
        for j in range(mu):
            low = [c[tuple(sorted((i, j, k)))] for k in range(mu)]
            row.append(tuple(sum((ginv[l, k] * low[k] for k in range(mu)), Fraction(0))
                             for l in range(mu)))
        table.append(row)
    return table


def expected_product(mu: int) -> list:
    return [[tuple(Fraction(int(l == i + j)) for l in range(mu)) for j in range(mu)]
            for i in range(mu)]


def _mul(table, a, b):
    mu = len(table)
    out = [Fraction(0)] * mu
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if bj:
                for k, v in enumerate(table[i][j]):
                    out[k] += ai * bj * v
    return tuple(out)


def wdvv_check(F: FrobeniusData) -> bool:
    mu = F.mu
    table = F.product
    basis = [tuple(Fraction(int(k == i)) for k in range(mu)) for i in range(mu)]
    for i, j, k in product(range(mu), repeat=3):
        if _mul(table, _mul(table, basis[i], basis[j]), basis[k]) != \
                _mul(table, basis[i], _mul(table, basis[j], basis[k])):
            return False
    c = third_derivatives(F)
    for i, j, k in product(range(mu), repeat=3):
        gval = sum((table[i][j][l] * F.g[l, k] for l in range(mu)), Fraction(0))
        if gval != c[tuple(sorted((i, j, k)))]:
            return False
    return True


def apply_euler(F: FrobeniusData, p: Poly) -> Poly:
    out = Poly(F.mu)
    for i, e in enumerate(F.euler):
        out = out + e * p.diff(i)
    return out


def homogeneity_check(F: FrobeniusData):
    """``(4 - mu, E(Psi) - (4 - mu) Psi)``; passes when the remainder has degree <= 2."""
    d = Fraction(4 - F.mu)
    rem = apply_euler(F, F.potential) - F.potential * d
    return d, rem


def manifold_checks(F: FrobeniusData) -> list[Check]:
    mu = F.mu
    c = third_derivatives(F)
    expected = expected_product(mu)
    d, rem = homogeneity_check(F)
    return structure_constant_checks(F) + [
        Check("product-from-higgs", "manifold-product", F.product == expected),
        Check("product-from-potential", "manifold-product",
              product_from_potential(F) == expected),
        Check("structure-constants", "manifold-potential",
              all(v == (1 if i + j + k + 3 == mu + 2 else 0) for (i, j, k), v in c.items())),
        Check("wdvv", "manifold-associativity", wdvv_check(F)),
        Check("euler-homogeneity", "manifold-euler", rem.is_zero() or rem.total_degree() <= 2,
              f"degree {d}"),
    ] + fts_axiom_check(manifold_fts(F))


# ---------------------------------------------------------------------------
# logarithmic structure

@dataclass
class SectionTest:
    label: str
    basis: str
    index: int
    flat: bool
    IC: bool
    GC: bool
    EC: bool


@dataclass
class LogReport:
    metric_rank_at_0: int
    metric_nondegenerate: bool
    sections: list = field(default_factory=list)

    def section(self, label: str) -> SectionTest:
        return next(s for s in self.sections if s.label == label)


def _closure_rank(ops, v) -> int:
    """Dimension of the span of v under repeated application of the operators."""
    pivots: dict = {}

    def insert(u):
        u = list(u)
        for col, row in pivots.items():
            if u[col]:
                f = u[col]
                u = [a - f * b for a, b in zip(u, row)]
        lead = next((i for i, a in enumerate(u) if a), None)
        if lead is None:
            return False
        f = u[lead]
        u = [a / f for a in u]
        for col, row in pivots.items():
            if row[lead]:
                g = row[lead]
                pivots[col] = [a - g * b for a, b in zip(row, u)]
        pivots[lead] = u
        return True

    frontier = [list(v)] if insert(v) else []
    while frontier:
        nxt = []
        for u in frontier:
            for A in ops:
                img = A.apply(u)
                if insert(img):
                    nxt.append(img)
        frontier = nxt
    return len(pivots)


def log_structure(w) -> LogReport:
    sp = build_spectrum(w)
    mu, n = sp.mu, sp.n
    Gphi0 = build_pairing(sp, "phi").G.poly_map("at_zero", X_VAR).to_rational()
    metric_rank = rank(Gphi0)
    Ainf = build_Ainf(sp)
    candidates = [("omega_0", "omega", 0), ("omega_1", "omega", 1), ("phi_0", "phi", 0),
                  ("psi_0", "psi", 0)]
    if mu >= n + 2:
        candidates.append((f"psi_{n + 1}", "psi", n + 1))
    out = []
    for label, basis, k in candidates:
        Abar = build_A0(sp, basis).poly_map("at_zero", X_VAR).to_rational()
        R = build_R(sp, basis)
        Phi0 = Abar / (-mu)
        e = [Fraction(int(i == k)) for i in range(mu)]
        out.append(SectionTest(
            label, basis, k,
            flat=R[k, k] == 0,
            IC=any(Phi0.apply(e)),
            GC=_closure_rank([Phi0, Abar], e) == mu,
            EC=all(v == 0 for (i, j), v in Ainf.items() if j == k and i != k),
        ))
    return LogReport(metric_rank, metric_rank == mu, out)
