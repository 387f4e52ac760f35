from fractions import Fraction

import pytest
import sympy

from limfrob.algebra.matrix import Matrix
from limfrob.algebra.poly import laurent
from limfrob.connection import (ConnectionForm, Pairing, curvature, flat_basis_conjugation,
                                gauge_transform, is_flat, pairing_flat_check, ramify,
                                residue_x, theta_components)
from limfrob.family import (build_A0, build_connection, build_pairing, build_R, gauge_matrix)
from limfrob.spectrum import build_spectrum

from conftest import SMALL, matrix_to_sympy, rational_from_sympy, theta_sym, x_sym

F = Fraction


def sympy_connection(w, basis):
    """Connection matrices written directly from the closed forms with sympy."""
    sp = build_spectrum(w)
    mu, n = sp.mu, sp.n
    A = sympy.zeros(mu, mu)
    for i in range(mu - 1):
        A[i + 1, i] = mu
    A[0, mu - 1] = mu
    if basis == "omega":
        A[1, 0] = mu * x_sym
        R = [0] + [-1] * n + [-sympy.Rational(sp.s[mu + n - k]) / mu for k in range(n + 1, mu)]
    elif basis == "phi":
        A[0, mu - 1] = mu * x_sym
        R = [0] * (n + 1) + [sympy.Rational(sp.s[k]) / mu for k in range(n + 1, mu)]
    else:
        if mu == n + 1:
            A[0, mu - 1] = mu * x_sym
        else:
            A[n + 1, n] = mu * x_sym
        R = [0] * (n + 1) + [-sympy.Rational(sp.s[mu + n - k]) / mu for k in range(n + 1, mu)]
    Ainf = sympy.diag(*[sympy.Rational(a) for a in sp.alpha])
    Wt = A / theta_sym ** 2 + Ainf / theta_sym
    Wx = (sympy.diag(*R) - A / (mu * theta_sym)) / x_sym
    return Wt, Wx


@pytest.mark.parametrize("w", [(1,), (2,), (1, 1), (2, 2), (1, 2), (3, 2)])
@pytest.mark.parametrize("basis", ["omega", "phi", "psi"])
def test_matches_sympy_and_flat(w, basis):
    Wt, Wx = sympy_connection(w, basis)
    C = build_connection(w, basis)
    assert sympy.simplify(matrix_to_sympy(C.omega_theta) - Wt).is_zero_matrix
    assert sympy.simplify(matrix_to_sympy(C.omega_x) - Wx).is_zero_matrix
    curv = sympy.diff(Wx, theta_sym) - sympy.diff(Wt, x_sym) + Wt * Wx - Wx * Wt
    assert sympy.simplify(curv).is_zero_matrix
    assert is_flat(C)


@pytest.mark.parametrize("w", SMALL)
def test_all_bases_flat(w):
    for b in ("omega", "phi", "psi", "flat"):
        assert curvature(build_connection(w, b)).is_zero()


def test_curvature_detects_perturbation():
    C = build_connection((2, 2))
    bumped = ConnectionForm(C.size, C.omega_theta + Matrix.unit(5, 0, 1, laurent(1, 0, -1)),
                            C.omega_x, C.basis)
    assert not is_flat(bumped)


@pytest.mark.parametrize("w", SMALL)
@pytest.mark.parametrize("basis", ["phi", "psi"])
def test_gauge_transform_reaches_closed_forms(w, basis):
    got = gauge_transform(build_connection(w), gauge_matrix(w, basis), basis)
    want = build_connection(w, basis)
    assert got.omega_theta == want.omega_theta and got.omega_x == want.omega_x


def test_gauge_transform_sympy_oracle():
    w = (2, 4)
    exps = [0, 2, 1, 0, -1, 0, 3]
    D = sympy.diag(*[x_sym ** e for e in exps])
    Dm = Matrix.diag([laurent(1, e) for e in exps])
    Wt, Wx = sympy_connection(w, "omega")
    C = gauge_transform(build_connection(w), Dm)
    assert sympy.simplify(matrix_to_sympy(C.omega_theta) - D.inv() * Wt * D).is_zero_matrix
    expected_x = D.inv() * Wx * D + D.inv() * sympy.diff(D, x_sym)
    assert sympy.simplify(matrix_to_sympy(C.omega_x) - expected_x).is_zero_matrix
    assert is_flat(C)


def test_gauge_rejects_non_diagonal_and_theta():
    C = build_connection((1, 1))
    with pytest.raises(ValueError):
        gauge_transform(C, Matrix.from_rows([[1, 1, 0], [0, 1, 0], [0, 0, 1]]))
    with pytest.raises(ValueError):
        gauge_transform(C, Matrix.diag([laurent(1, 0, 1), laurent(1), laurent(1)]))
    with pytest.raises(ValueError):
        gauge_transform(C, Matrix.diag([0, 1, 1]))


def test_ramify_keeps_flatness_and_jacobian():
    C = build_connection((2, 2))
    Cy = ramify(C, 3)
    assert Cy.ramification == 3 and is_flat(Cy)
    # the log derivative is unchanged up to the factor r
    assert Cy.log_x_matrix().poly_map("subs_power", 0, 1) == \
        C.log_x_matrix().poly_map("subs_power", 0, 3)


# -- residues -----------------------------------------------------------------

def sympy_residue_eigs(w, basis):
    _, Wx = sympy_connection(w, basis)
    Res = sympy.simplify(x_sym * Wx).subs(x_sym, 0)
    eig = Res.eigenvals()
    return sorted(rational_from_sympy(k) for k, m in eig.items() for _ in range(m))


@pytest.mark.parametrize("w", [(2, 2), (1, 1), (3,), (1, 2), (2, 3)])
@pytest.mark.parametrize("basis", ["omega", "phi", "psi"])
def test_residue_eigenvalues_sympy(w, basis):
    res = residue_x(build_connection(w, basis))
    assert res.eigenvalues == sympy_residue_eigs(w, basis)
    assert res.theta_free


def test_residue_golden_22():
    # frozen from the sympy oracle above
    h = F(1, 2)
    assert residue_x(build_connection((2, 2), "phi")).eigenvalues == [0, 0, 0, h, h]
    assert residue_x(build_connection((2, 2), "psi")).eigenvalues == [-h, -h, 0, 0, 0]
    assert residue_x(build_connection((2, 2), "omega")).eigenvalues == [-1, -1, -h, -h, 0]
    assert residue_x(build_connection((1, 1), "omega")).eigenvalues == [-1, -1, 0]


def test_residue_1_1_1_phi_nilpotent():
    assert residue_x(build_connection((1, 1, 1), "phi")).eigenvalues == [0, 0, 0, 0]


def test_residue_3_psi_range():
    assert residue_x(build_connection((3,), "psi")).in_range(-1, 0, False, True)


def test_residue_ordering_for_psi_22():
    res = residue_x(build_connection((2, 2), "psi"))
    assert res.acyclic and res.order == [3, 4, 0, 1, 2]


def _form_with_residue(M):
    n = M.nrows
    zero = Matrix.zeros(n)
    return ConnectionForm(n, zero, M.to_poly(2).scale(laurent(1, -1)))


def test_residue_cyclic_rational_roots():
    # [[0, 1], [2, 1]] has eigenvalues -1 and 2: graph is a cycle, Bareiss path
    res = residue_x(_form_with_residue(Matrix.from_rows([[0, 1], [2, 1]])))
    assert not res.acyclic and res.eigenvalues == [-1, 2]


def test_residue_irrational_is_indeterminate():
    res = residue_x(_form_with_residue(Matrix.from_rows([[0, 1], [2, 0]])))
    assert res.eigenvalues is None and res.in_range(-10, 10, True, True) is None


def test_residue_rejects_higher_pole():
    C = ConnectionForm(1, Matrix.zeros(1), Matrix(1, 1, {(0, 0): laurent(1, -2)}))
    with pytest.raises(ValueError):
        residue_x(C)


def test_theta_components():
    C = build_connection((1, 1))
    parts = theta_components(C.omega_theta)
    assert sorted(parts) == [-2, -1]


# -- pairing flatness -----------------------------------------------------------

@pytest.mark.parametrize("w", SMALL)
@pytest.mark.parametrize("basis", ["omega", "phi", "flat"])
def test_pairing_flatness(w, basis):
    checks = pairing_flat_check(build_connection(w, basis), build_pairing(w, basis))
    assert [c.passed for c in checks] == [True, True, True]


def test_pairing_flatness_detects_wrong_pairing():
    w = (2, 2)
    P = build_pairing(w, "omega")
    bad = Pairing(P.size, P.G.map(lambda v: v * laurent(1, 1)), P.weight, "omega")
    checks = {c.name: c.passed for c in pairing_flat_check(build_connection(w), bad)}
    assert checks["pairing-x-derivative"] is False


def test_pairing_basis_mismatch():
    with pytest.raises(ValueError):
        pairing_flat_check(build_connection((2, 2), "phi"), build_pairing((2, 2), "omega"))


def test_flat_basis_conjugation_exponents():
    conj, ok = flat_basis_conjugation(build_A0((2, 2)), build_R((2, 2)))
    assert ok
    assert conj.common_denominator() == 2
    assert conj.exponents()[3, 2] == F(1, 2)
    assert conj.exponents()[0, 4] == F(1, 2)
    # x^(R_1 - R_0) cancels the x of the (1, 0) entry; the limit is [A0]
    assert conj.limit_at_zero() == Matrix(5, 5, {(1, 0): 5, (2, 1): 5, (4, 3): 5})
