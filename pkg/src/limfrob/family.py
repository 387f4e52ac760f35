"""Closed-form matrices of the family ``F = sum(c_i u_i) + x / u^w``.

Indices are 0-based throughout.  Bases:

``omega``  the Birkhoff solution over the punctured x-line;
``phi``    ``omega * diag(1, x, ..., x)``;
``psi``    ``omega * diag(1, x (n times), 1, ..., 1)``;
``flat``   ``omega * x^-R``, carried on the ramified coordinate ``x = y**r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .algebra.matrix import Matrix
from .algebra.poly import X_VAR, Poly, laurent
from .connection import ConnectionForm, Pairing, gauge_transform, ramify
from .spectrum import Spectrum, build_spectrum, validate_weights


def _check_basis(basis, allowed=("omega", "phi", "psi")):
    if basis not in allowed:
        raise ValueError(f"unknown basis {basis!r}; expected one of {allowed}")


def _spectrum(w) -> Spectrum:
    return w if isinstance(w, Spectrum) else build_spectrum(w)


def gauge_exponents(w, basis: str) -> list[int]:
    """x-exponents of the diagonal gauge taking ``omega`` to ``basis``."""
    sp = _spectrum(w)
    mu, n = sp.mu, sp.n
    if basis == "omega":
        return [0] * mu
    if basis == "phi":
        return [0] + [1] * (mu - 1)
    if basis == "psi":
        return [0] + [1] * n + [0] * (mu - n - 1)
    raise ValueError(f"no integral gauge for basis {basis!r}")


def gauge_matrix(w, basis: str) -> Matrix:
    return Matrix.diag([laurent(1, p) for p in gauge_exponents(w, basis)])


def build_A0(w, basis: str = "omega") -> Matrix:
    _check_basis(basis)
    sp = _spectrum(w)
    mu, n = sp.mu, sp.n
    ent = {(i + 1, i): laurent(mu) for i in range(mu - 1)}
    ent[0, mu - 1] = laurent(mu)
    if basis == "omega":
        ent[1, 0] = laurent(mu, 1)
    elif basis == "phi" or mu == n + 1:
        ent[0, mu - 1] = laurent(mu, 1)
    else:
        ent[n + 1, n] = laurent(mu, 1)
    return Matrix(mu, mu, ent)


def build_A0_punctual(w) -> Matrix:
    """The constant matrix with ``mu`` on the sub-diagonal and in the corner."""
    return build_A0(w, "omega").map(lambda v: v.evaluate((1, 1)))


def build_Ainf(w) -> Matrix:
    return Matrix.diag(_spectrum(w).alpha)


def build_R(w, basis: str = "omega") -> Matrix:
    _check_basis(basis)
    sp = _spectrum(w)
    mu, n, s = sp.mu, sp.n, sp.s
    if basis == "omega":
        d = [Fraction(0)] + [Fraction(-1)] * n + [-s[mu + n - k] / mu for k in range(n + 1, mu)]
    elif basis == "phi":
        d = [Fraction(0)] * (n + 1) + [s[k] / mu for k in range(n + 1, mu)]
    else:
        d = [Fraction(0)] * (n + 1) + [-s[mu + n - k] / mu for k in range(n + 1, mu)]
    return Matrix.diag(d)


def flat_ramification(w) -> int:
    """Smallest ``r`` making every exponent of ``x^-R`` integral in ``y``."""
    R = build_R(w, "omega")
    return lcm(*(R[i, i].denominator for i in range(R.nrows)))


def build_connection(w, basis: str = "omega") -> ConnectionForm:
    """Connection matrices ``(A0/theta + Ainf) dtheta/theta + (R - A0/(mu theta)) dx/x``."""
    _check_basis(basis, ("omega", "phi", "psi", "flat"))
    sp = _spectrum(w)
    mu = sp.mu
    if basis == "flat":
        r = flat_ramification(sp)
        C = ramify(build_connection(sp, "omega"), r)
        R = build_R(sp, "omega")
        D = Matrix.diag([laurent(1, int(-r * R[i, i])) for i in range(mu)])
        return gauge_transform(C, D, "flat")
    A0 = build_A0(sp, basis)
    Ainf = build_Ainf(sp)
    R = build_R(sp, basis)
    th_m1, th_m2, x_m1 = laurent(1, 0, -1), laurent(1, 0, -2), laurent(1, -1, 0)
    omega_theta = A0.scale(th_m2) + Ainf.scale(th_m1)
    omega_x = (R.to_poly(2) - A0.scale(laurent(Fraction(1, mu), 0, -1))).scale(x_m1)
    return ConnectionForm(mu, omega_theta, omega_x, basis)


def build_pairing(w, basis: str = "omega") -> Pairing:
    """theta^n-coefficient of the pairing in the bases ``omega``, ``phi`` or ``flat``."""
    sp = _spectrum(w)
    mu, n = sp.mu, sp.n
    if basis == "psi":
        raise ValueError("no pairing is defined in the psi basis; use omega or phi "
                         "and transport it if needed")
    _check_basis(basis, ("omega", "phi", "flat"))
    if basis == "flat":
        r = flat_ramification(sp)
        Gw = build_pairing(sp, "omega").G.poly_map("subs_power", X_VAR, r)
        R = build_R(sp, "omega")
        G = Matrix(mu, mu, {(i, j): v * laurent(1, int(-r * (R[i, i] + R[j, j])))
                            for (i, j), v in Gw.items()})
        return Pairing(mu, G.poly_map("evaluate", (1, 1)) if _is_constant(G) else G,
                       n, "flat", r)
    ent = {}
    for k in range(n + 1):
        if basis == "omega":
            ent[k, n - k] = laurent(1, -1 if k in (0, n) else -2)
        else:
            ent[k, n - k] = laurent(1)
    for k in range(n + 1, mu):
        ent[k, mu + n - k] = laurent(1, -1 if basis == "omega" else 1)
    return Pairing(mu, Matrix(mu, mu, ent), n, basis)


def _is_constant(M: Matrix) -> bool:
    return all(not isinstance(v, Poly) or v.is_constant() for _, v in M.items())


def transport_pairing(P: Pairing, exponents) -> Matrix:
    """Pairing matrix in the basis ``e * diag(x^p)``: entry ``x^(p_i+p_j) G_ij``."""
    return Matrix(P.size, P.size, {(i, j): v * laurent(1, exponents[i] + exponents[j])
                                   for (i, j), v in P.G.items()})


# ---------------------------------------------------------------------------
# derivation of the basis from the monomial relations

@dataclass(frozen=True)
class MonomialSection:
    """``scalar * x^x_power * u^exponents * omega_0``."""

    exponents: tuple
    scalar: Fraction = Fraction(1)
    x_power: int = 0


@dataclass(frozen=True)
class GammaData:
    weights: tuple
    mu: int
    u_coefficients: tuple

    def phi(self, j: int, a) -> Fraction:
        """Weighted degree of ``u^a`` for the j-th face."""
        total = Fraction(sum(a))
        if j == 0:
            return total
        return total - Fraction(self.mu, self.weights[j - 1]) * a[j - 1]

    def pieces(self):
        """Monomial pieces ``(coeff, x_power, exponents)`` of F."""
        n = len(self.weights)
        out = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            out.append((Fraction(self.u_coefficients[i]), 0, tuple(e)))
        out.append((Fraction(1), 1, tuple(-wi for wi in self.weights)))
        return out

    def h(self, j: int) -> MonomialSection:
        """``chi_j(F) - F`` computed on the pieces of F; a single monomial."""
        terms = [(c * (self.phi(j, e) - 1), p, e) for c, p, e in self.pieces()]
        terms = [t for t in terms if t[0]]
        if len(terms) != 1:
            raise AssertionError(f"h_{j} is not a monomial: {terms}")
        (c, p, e), = terms
        return MonomialSection(e, c, p)


def gamma_data(w, u_coefficients=None) -> GammaData:
    """Face data for ``F``.  ``u_coefficients`` default to the weights, the
    normalisation in which every ladder section is a monic monomial."""
    w = validate_weights(w)
    mu = 1 + sum(w)
    c = tuple(w) if u_coefficients is None else tuple(u_coefficients)
    if len(c) != len(w):
        raise ValueError("one coefficient per weight is required")
    return GammaData(w, mu, c)


@dataclass
class Derivation:
    sections: list
    A0: Matrix
    schedule: list
    candidates: list
    schedule_count: int
    schedules: list = field(default_factory=list)


class ScheduleError(RuntimeError):
    pass


def derive_basis(w, basis: str = "omega", u_coefficients=None,
                 max_schedules: int = 64) -> Derivation:
    """Rebuild the basis from the relations ``(tau d_tau + phi_j(g)) g = tau h_j g``.

    Starting from ``omega_0 = 1`` the first step uses the face ``j = 0``
    (``omega_1 = u_0 omega_0``).  Step ``k`` then needs a face ``j`` with
    ``phi_j(a(k)) = alpha_k``; the relation gives
    ``-(1/mu)(tau d_tau + alpha_k) omega_k = tau * kappa * omega_{k+1}`` and
    the matrix entry ``A0[k+1, k] = mu * kappa``.  The ladder must return to
    ``omega_0`` after ``mu`` steps.
    """
    _check_basis(basis)
    sp = build_spectrum(w)
    gd = gamma_data(sp.weights, u_coefficients)
    mu, n = sp.mu, sp.n
    xp = gauge_exponents(sp, basis)
    zero = (0,) * n
    hs = [gd.h(j) for j in range(n + 1)]

    def step(a, j):
        return tuple(x + y for x, y in zip(a, hs[j].exponents))

    def options(k, a):
        if k == 0:
            return [0]
        return [j for j in range(n + 1) if gd.phi(j, a) == sp.alpha[k]]

    memo: dict = {}

    def count(k, a):
        if k == mu:
            return 1 if a == zero else 0
        if k > 0 and a == zero:
            return 0
        key = (k, a)
        if key not in memo:
            memo[key] = sum(count(k + 1, step(a, j)) for j in options(k, a))
        return memo[key]

    total = count(0, zero)
    if total == 0:
        raise ScheduleError(f"no face schedule closes the ladder for weights {sp.weights}")

    schedule, a = [], zero
    ladder = [a]
    cands = []
    for k in range(mu):
        opts = options(k, a)
        cands.append(opts)
        j = next(j for j in opts if count(k + 1, step(a, j)))
        schedule.append(j)
        a = step(a, j)
        ladder.append(a)
    if ladder[-1] != zero:
        raise ScheduleError("ladder failed to close")

    A0 = {}
    for k in range(mu):
        h = hs[schedule[k]]
        nxt = (k + 1) % mu
        A0[nxt, k] = laurent(-h.scalar, xp[k] + h.x_power - xp[nxt])
    sections = [MonomialSection(ladder[k], Fraction(1), xp[k]) for k in range(mu)]

    schedules = []
    if total <= max_schedules:
        def walk(k, a, acc):
            if k == mu:
                if a == zero:
                    schedules.append(list(acc))
                return
            if k > 0 and a == zero:
                return
            for j in options(k, a):
                walk(k + 1, step(a, j), acc + [j])
        walk(0, zero, [])
    return Derivation(sections, Matrix(mu, mu, A0), schedule, cands, total, schedules)
