"""Exact linear algebra over Q and over Laurent polynomial rings."""

from __future__ import annotations

from fractions import Fraction

from .matrix import Matrix
from .poly import THETA_VAR, Poly


class NotNilpotentError(ValueError):
    pass


class SingularPairingError(ValueError):
    pass


def _require_square(M: Matrix):
    if not M.is_square():
        raise ValueError(f"expected a square matrix, got {M.nrows}x{M.ncols}")


def _rational_rows(M: Matrix):
    return [{j: Fraction(v) if not isinstance(v, Poly) else v.constant_value()
             for j, v in row.items()} for row in M.row_dicts()]


# ---------------------------------------------------------------------------
# elimination over Q

def _echelon(rows):
    """Sparse Gaussian elimination.  Returns the list of (pivot col, row)."""
    pivots: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                inv = 1 / row[col]
                pivots[col] = {j: v * inv for j, v in row.items()}
                break
            f = row[col]
            for j, v in piv.items():
                nv = row.get(j, 0) - f * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
    return pivots


def rank(M: Matrix) -> int:
    return len(_echelon(_rational_rows(M)))


def solve_inverse(M: Matrix) -> Matrix:
    """Inverse of a square rational matrix (Gauss-Jordan)."""
    _require_square(M)
    n = M.nrows
    a = [[Fraction(x) for x in row] for row in M.to_rational().to_rows()]
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            raise ZeroDivisionError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        inv[c], inv[p] = inv[p], inv[c]
        f = 1 / a[c][c]
        a[c] = [v * f for v in a[c]]
        inv[c] = [v * f for v in inv[c]]
        for r in range(n):
            if r != c and a[r][c]:
                g = a[r][c]
                a[r] = [x - g * y for x, y in zip(a[r], a[c])]
                inv[r] = [x - g * y for x, y in zip(inv[r], inv[c])]
    return Matrix.from_rows(inv)


# ---------------------------------------------------------------------------
# fraction-free determinant and characteristic polynomial

def bareiss_det(M: Matrix, nvars: int) -> Poly:
    """Determinant of a square polynomial matrix (non-negative exponents)
    by fraction-free Bareiss elimination with row pivoting."""
    _require_square(M)
    n = M.nrows
    if n == 0:
        return Poly.const(1, nvars)
    rows = [{j: (v if isinstance(v, Poly) else Poly.const(v, nvars)) for j, v in r.items()}
            for r in M.row_dicts()]
    sign = 1
    prev = Poly.const(1, nvars)
    for k in range(n - 1):
        if k not in rows[k]:
            swap = next((i for i in range(k + 1, n) if k in rows[i]), None)
            if swap is None:
                return Poly(nvars)
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        piv = rows[k][k]
        pivrow = {j: v for j, v in rows[k].items() if j > k}
        for i in range(k + 1, n):
            row = rows[i]
            a = row.get(k)
            new = {}
            cols = {j for j in row if j > k}
            if a is not None:
                cols |= pivrow.keys()
            for j in cols:
                v = row.get(j)
                t = v * piv if v is not None else Poly(nvars)
                if a is not None and j in pivrow:
                    t = t - a * pivrow[j]
                if t:
                    new[j] = t.exact_div(prev)
            rows[i] = new
        prev = piv
    last = rows[n - 1].get(n - 1)
    if last is None:
        return Poly(nvars)
    return last * sign


def _ring_size(M: Matrix) -> int:
    for v in (v for _, v in M.items()):
        if isinstance(v, Poly):
            return v.nvars
    return 0


def char_poly(M: Matrix) -> Poly:
    """``det(lam*I - M)``.

    Entries may be rationals or Laurent polynomials in ``k`` variables; the
    result lives in ``k + 1`` variables with ``lam`` last.  Negative powers
    are cleared by a monomial rescaling before the fraction-free
    elimination and restored afterwards.
    """
    _require_square(M)
    n = M.nrows
    k = _ring_size(M)
    P = M.to_poly(k)
    shift = [0] * k
    for _, v in P.items():
        for var in range(k):
            shift[var] = max(shift[var], -v.min_exponent(var))
    t = Poly.monomial(1, tuple(shift))
    lam = Poly.gen(k, k + 1)
    tl = t.extend(k + 1) * lam
    N = Matrix(n, n, {(i, i): tl for i in range(n)}) - P.map(lambda v: (v * t).extend(k + 1))
    det = bareiss_det(N, k + 1)
    return det / Poly.monomial(1, tuple(s * n for s in shift) + (0,))


def lambda_coefficients(p: Poly) -> list:
    """Coefficients of a polynomial in its last variable, lowest degree first."""
    var = p.nvars - 1
    deg = p.max_exponent(var)
    return [p.coefficient(var, d) for d in range(deg + 1)]


# ---------------------------------------------------------------------------
# univariate helpers over Q (coefficient lists, lowest degree first)

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_divmod(a, b):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        c = r[-1] / b[-1]
        d = len(r) - len(b)
        q[d] = c
        for i, bv in enumerate(b):
            r[i + d] -= c * bv
        r = _trim(r)
    return q, r


def poly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return [c / a[-1] for c in a] if a else a


def poly_lcm(a, b):
    g = poly_gcd(a, b)
    q, _ = poly_divmod(_mul(a, b), g)
    q = _trim(q)
    return [c / q[-1] for c in q]


def _mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


# ---------------------------------------------------------------------------
# Krylov sequences, minimal polynomials, nilpotent structure

def krylov_min_poly(M: Matrix, v) -> list:
    """Monic minimal polynomial of ``v`` under ``M`` (coefficient list)."""
    n = M.nrows
    basis: list[tuple[int, dict, dict]] = []  # (pivot, reduced vector, combination)
    w = {i: Fraction(x) for i, x in enumerate(v) if x}
    rows = _rational_rows(M)
    cols: dict[int, list] = {}
    for i, r in enumerate(rows):
        for j, x in r.items():
            cols.setdefault(j, []).append((i, x))
    for step in range(n + 1):
        vec = dict(w)
        comb = {step: Fraction(1)}
        for piv, bvec, bcomb in basis:
            f = vec.get(piv)
            if f:
                for j, x in bvec.items():
                    nv = vec.get(j, 0) - f * x
                    if nv:
                        vec[j] = nv
                    else:
                        vec.pop(j, None)
                for j, x in bcomb.items():
                    comb[j] = comb.get(j, 0) - f * x
        if not vec:
            # M^step v is a combination of lower powers
            return [comb.get(k, Fraction(0)) for k in range(step + 1)]
        piv = min(vec)
        inv = 1 / vec[piv]
        basis.append((piv, {j: x * inv for j, x in vec.items()},
                      {j: x * inv for j, x in comb.items()}))
        nw = {}
        for j, x in w.items():
            for i, a in cols.get(j, ()):
                nw[i] = nw.get(i, 0) + a * x
        w = {i: x for i, x in nw.items() if x}
    raise AssertionError("Krylov sequence did not terminate")


def minimal_polynomial(M: Matrix) -> list:
    _require_square(M)
    n = M.nrows
    mp = [Fraction(1)]
    for i in range(n):
        e = [0] * n
        e[i] = 1
        mp = poly_lcm(mp, krylov_min_poly(M, e))
        if len(mp) == n + 1:
            break
    return mp


def has_cyclic_vector(M: Matrix, v=None) -> bool:
    """Whether ``v`` (or, if absent, some vector) is cyclic for ``M``."""
    _require_square(M)
    n = M.nrows
    if v is not None:
        if len(v) != n:
            raise ValueError(f"vector of length {len(v)} for a {n}x{n} matrix")
        return len(krylov_min_poly(M, v)) == n + 1
    return len(minimal_polynomial(M)) == n + 1


def nilpotent_block_sizes(M: Matrix) -> tuple:
    """Jordan block sizes of a nilpotent rational matrix, largest first.

    The number of blocks of size >= k is rank(M^(k-1)) - rank(M^k).
    """
    _require_square(M)
    n = M.nrows
    Q = M.to_rational()
    ranks = [n]
    P = Matrix.identity(n)
    while ranks[-1] > 0:
        if len(ranks) > n:
            raise NotNilpotentError("matrix is not nilpotent")
        P = P @ Q
        ranks.append(rank(P))
    if len(ranks) - 1 > n:
        raise NotNilpotentError("matrix is not nilpotent")
    ranks.append(0)
    sizes = []
    for k in range(1, len(ranks) - 1):
        at_least_k = ranks[k - 1] - ranks[k]
        at_least_k1 = ranks[k] - ranks[k + 1]
        sizes.extend([k] * (at_least_k - at_least_k1))
    return tuple(sorted(sizes, reverse=True))


# ---------------------------------------------------------------------------
# inverses over the Laurent ring and adjoints

def laurent_inverse(G: Matrix) -> Matrix:
    """Inverse of a matrix with Laurent polynomial (or rational) entries.

    Monomial matrices (one nonzero monomial per row and column) are inverted
    directly.  Otherwise the determinant must be a unit of the Laurent ring
    (a monomial) and the adjugate is used.
    """
    _require_square(G)
    n = G.nrows
    by_row: dict[int, list] = {}
    for (i, j), v in G.items():
        by_row.setdefault(i, []).append((j, v))
    monomial = (
        len(by_row) == n
        and all(len(r) == 1 for r in by_row.values())
        and len({r[0][0] for r in by_row.values()}) == n
        and all(not isinstance(r[0][1], Poly) or r[0][1].is_monomial() for r in by_row.values())
    )
    if monomial:
        return Matrix(n, n, {(j, i): 1 / v if not isinstance(v, Poly) else v ** -1
                             for i, ((j, v),) in by_row.items()})
    k = _ring_size(G)
    if k == 0:
        try:
            return solve_inverse(G)
        except ZeroDivisionError as exc:
            raise SingularPairingError("pairing matrix is singular") from exc
    det = _laurent_det(G, k)
    if det.is_zero():
        raise SingularPairingError("pairing matrix is singular")
    if not det.is_monomial():
        raise SingularPairingError(
            f"determinant {det} is not a unit of the Laurent ring; inverse is not Laurent"
        )
    adj = {}
    for i in range(n):
        for j in range(n):
            minor = Matrix(n - 1, n - 1, {
                (a - (a > j), b - (b > i)): v
                for (a, b), v in G.items() if a != j and b != i
            })
            c = _laurent_det(minor, k)
            if c:
                adj[i, j] = c * ((-1) ** (i + j)) / det
    return Matrix(n, n, adj)


def _laurent_det(M: Matrix, k: int) -> Poly:
    P = M.to_poly(k)
    shift = [0] * k
    for _, v in P.items():
        for var in range(k):
            shift[var] = max(shift[var], -v.min_exponent(var))
    t = Poly.monomial(1, tuple(shift))
    d = bareiss_det(P.map(lambda v: v * t), k)
    return d / Poly.monomial(1, tuple(s * M.nrows for s in shift))


def theta_flip(M: Matrix) -> Matrix:
    """Entrywise ``theta -> -theta`` (identity on rational entries)."""
    return M.map(lambda v: v.flip_sign(THETA_VAR) if isinstance(v, Poly) and v.nvars > THETA_VAR else v)


def adjoint(M: Matrix, G) -> Matrix:
    """Adjoint ``G^-1 * flip(M)^T * G`` with respect to a pairing.

    ``G`` is either a :class:`~limfrob.connection.Pairing` (whose inverse is
    cached) or a plain matrix.
    """
    Gm = getattr(G, "G", G)
    Ginv = G.G_inv if hasattr(G, "G_inv") else laurent_inverse(Gm)
    if M.shape != Gm.shape:
        raise ValueError("dimension mismatch between matrix and pairing")
    return Ginv @ theta_flip(M).T @ Gm
