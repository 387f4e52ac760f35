from fractions import Fraction
from itertools import combinations_with_replacement, product

import pytest
import sympy

from limfrob.algebra.matrix import Matrix
from limfrob.algebra.poly import Poly

x_sym, theta_sym = sympy.symbols("x theta")


def weight_grid(nmax, wmax):
    return [w for n in range(1, nmax + 1)
            for w in combinations_with_replacement(range(1, wmax + 1), n)]


def ordered_grid(nmax, wmax):
    return [w for n in range(1, nmax + 1) for w in product(range(1, wmax + 1), repeat=n)]


GRID = weight_grid(5, 6)
SMALL = [(1,), (2,), (3,), (1, 1), (1, 2), (2, 2), (1, 1, 1), (2, 3), (1, 2, 3), (3, 3)]


def to_sympy(v, names=(x_sym, theta_sym)):
    if isinstance(v, Poly):
        out = sympy.Integer(0)
        for e, c in v.terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for s, k in zip(names, e):
                term *= s ** k
            out += term
        return out
    v = Fraction(v)
    return sympy.Rational(v.numerator, v.denominator)


def matrix_to_sympy(M: Matrix, names=(x_sym, theta_sym)):
    return sympy.Matrix(M.nrows, M.ncols, lambda i, j: to_sympy(M[i, j], names))


def rational_from_sympy(r) -> Fraction:
    r = sympy.nsimplify(r)
    return Fraction(int(r.p), int(r.q))


@pytest.fixture
def small_weights():
    return SMALL


ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
