import numpy as np
import pytest

from moprl.ladder import (
    delta,
    e_matrix,
    f_matrix,
    f_matrix_via_expansion,
    frame_change,
    h_poly,
    integral_f_matrix,
    ladder_coeffs,
    ladder_coeffs_H,
    ode_coeffs,
    truncated_monic,
)
from moprl.matpoly import MatrixPolynomial, adjoint
from moprl.mop import assemble_Y, assemble_Y_derivative, build_sequence
from moprl.weights import AdConditionCase, hermite_b, ladder_diagonal, nilpotent_shift

SAMPLES = (0.3 + 0.7j, -1.2 + 0.4j, 2.1 - 1.5j)
L2 = np.array([[0.0, 1.0], [0.0, 0.0]])


def const(m):
    return MatrixPolynomial.constant(m)


def xpoly(dim):
    return MatrixPolynomial.monomial(1, np.eye(dim))


def random_source(seed, dim, degree):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=(degree + 1, dim, dim)) + 1j * rng.normal(size=(degree + 1, dim, dim))
    return MatrixPolynomial(c)


def pdiff(p, q):
    return (p - q).max_abs_coeff()


# ---------------------------------------------------------------------------
# building blocks

def test_truncated_monic(sh8, ha6):
    assert pdiff(truncated_monic(ha6, 3, 0), const(np.eye(2))) == 0
    assert pdiff(truncated_monic(ha6, 4, 4), ha6.P(4)) == 0
    assert pdiff(truncated_monic(sh8, 2, 1), xpoly(1)) <= 1e-14
    with pytest.raises(ValueError):
        truncated_monic(ha6, 2, 3)


def test_delta(ha6):
    G = ha6.spec.G
    for n in range(1, 6):
        assert pdiff(delta(ha6, n, 0), const(G.coeff(1))) == 0
        want = -xpoly(2) - const(ha6.coef(n, n - 1)) + const(L2)
        assert pdiff(delta(ha6, n, 1), want) <= 1e-15
    zero = MatrixPolynomial.zero(2)
    assert delta(ha6, 3, 0, zero).max_abs_coeff() == 0
    with pytest.raises(ValueError):
        delta(ha6, 3, 2)


# ---------------------------------------------------------------------------
# closed forms for the built-in families

def test_hermite_a_closed_forms(ha6):
    for n in range(7):
        c = ladder_coeffs(ha6, n)
        assert pdiff(c.A_poly, const(2 * np.eye(2))) <= 1e-10
        if n == 0:
            assert c.B_poly is None
        else:
            assert pdiff(c.B_poly, xpoly(2) - const(L2)) <= 1e-10


def test_hermite_b_closed_forms(seq_factory):
    seq = seq_factory("hermite-b-2", 6)
    B = seq.spec.params["B"]
    for n in range(1, 6):
        c = ladder_coeffs(seq, n)
        A = 2 * (np.eye(2) - adjoint(B) - seq.gamma[n] @ B @ seq.gamma_inv[n])
        assert pdiff(c.A_poly, const(A)) <= 1e-9
        assert pdiff(c.B_poly, xpoly(2) * (np.eye(2) - 2 * B)) <= 1e-9


def test_freud_a_closed_forms(seq_factory):
    seq = seq_factory("freud-a-2", 6)
    A = seq.spec.params["A"]
    al, be = seq.alpha, seq.beta
    x = xpoly(2)
    for n in range(1, 6):
        c = ladder_coeffs(seq, n)
        Ap = 4 * (x * x + x * al[n] + const(be[n + 1] + be[n] + al[n] @ al[n])).adjoint()
        Bp = 2 * x * x * x + 4 * (x * be[n] + const(be[n] @ al[n - 1] + al[n] @ be[n])) - const(A)
        assert pdiff(c.A_poly, Ap) <= 1e-8
        assert pdiff(c.B_poly, Bp) <= 1e-8


@pytest.mark.parametrize("key", ["hermite-a-nil2", "freud-a-2", "hermite-b-3", "freud-b-3"])
def test_symmetry(seq_factory, key):
    seq = seq_factory(key, 6)
    for n in range(6):
        A = ladder_coeffs(seq, n).A_poly
        lhs = seq.gamma[n] * A.adjoint()
        assert pdiff(lhs, A * seq.gamma[n]) <= 1e-9 * max(1, lhs.max_abs_coeff())


def test_linearity(ha6):
    G1, G2 = random_source(1, 2, 2), random_source(2, 2, 1)
    for n in range(1, 5):
        s = ladder_coeffs(ha6, n, G1 + G2)
        a, b = ladder_coeffs(ha6, n, G1), ladder_coeffs(ha6, n, G2)
        assert pdiff(s.A_poly, a.A_poly + b.A_poly) <= 1e-13
        assert pdiff(s.B_poly, a.B_poly + b.B_poly) <= 1e-13


# ---------------------------------------------------------------------------
# F_n

def test_f_matrix_hermite_a(ha6):
    for n in range(1, 6):
        F = f_matrix(ha6, n, 0.0)
        assert np.max(np.abs(F[:2, :2] - ha6.spec.G(0.0))) <= 1e-10
        assert np.max(np.abs(F[2:, 2:] + adjoint(ha6.spec.G(0.0)))) <= 1e-10
    with pytest.raises(ValueError):
        f_matrix(ha6, 0, 1j)


def test_f_matrix_constant_source(ha6):
    M0 = np.array([[1.0 + 2j, -0.5], [0.3j, 2.0]])
    want = np.block([[M0, np.zeros((2, 2))], [np.zeros((2, 2)), -adjoint(M0)]])
    for n in range(1, 5):
        for z in SAMPLES:
            assert np.max(np.abs(f_matrix(ha6, n, z, const(M0)) - want)) <= 1e-10
            assert np.max(np.abs(f_matrix_via_expansion(ha6, n, z, const(M0)) - want)) <= 1e-10


@pytest.mark.parametrize("degree", [0, 1, 2])
def test_f_matrix_cross_construction(seq_factory, degree):
    for key in ("hermite-a-nil2", "hermite-b-2"):
        seq = seq_factory(key, 6)
        src = seq.spec.G if degree == 1 else random_source(7 + degree, 2, degree)
        for n in range(1, 5):
            for z in SAMPLES:
                a = f_matrix(seq, n, z, src)
                b = f_matrix_via_expansion(seq, n, z, src)
                assert np.max(np.abs(a - b)) <= 1e-9 * max(1, np.max(np.abs(a)))


def test_f_matrix_is_log_derivative(ha6):
    # dY/dz = (F_n - Y diag(G, -G*) Y^{-1}) Y for the polynomial source
    for n in (1, 2, 3):
        for z in SAMPLES:
            Y = assemble_Y(ha6, n, z)
            lhs = assemble_Y_derivative(ha6, n, z)
            rhs = (f_matrix(ha6, n, z) - frame_change(ha6, n, z)) @ Y
            assert np.max(np.abs(lhs - rhs)) <= 1e-8


def test_lax_pair(ha6):
    for n in range(1, 5):
        for z in SAMPLES:
            dE = np.zeros((4, 4), dtype=complex)
            dE[:2, :2] = np.eye(2)
            E = e_matrix(ha6, n, z)
            lhs = dE + E @ f_matrix(ha6, n, z)
            assert np.max(np.abs(lhs - f_matrix(ha6, n + 1, z) @ E)) <= 1e-8


def test_integral_frame(ha6):
    z = 1 + 1j
    for n in (1, 2):
        lhs = assemble_Y_derivative(ha6, n, z)
        rhs = integral_f_matrix(ha6, n, z) @ assemble_Y(ha6, n, z)
        assert np.max(np.abs(lhs - rhs)) <= 1e-6


# ---------------------------------------------------------------------------
# H-family

def test_h_poly_case1():
    case = AdConditionCase("case1", L2, ladder_diagonal(2), L2)
    H = h_poly(case)
    want = 1j * (const(np.diag([1.0, 0.0])) - xpoly(2) * L2)
    assert pdiff(H, want) == 0


def test_h_poly_rejects_invalid_case():
    bad = AdConditionCase("case1", L2, np.diag([0.0, 1.0]), L2)
    with pytest.raises(ValueError):
        h_poly(bad)


def test_case1_coefficients(seq_factory):
    seq = seq_factory("case1-2", 6)
    case = AdConditionCase("case1", L2, ladder_diagonal(2), L2)
    for n in range(6):
        A = ladder_coeffs_H(seq, n, case).A_poly
        want = 1j * (-adjoint(L2) + seq.gamma[n] @ L2 @ seq.gamma_inv[n])
        assert pdiff(A, const(want)) <= 1e-9
        assert pdiff(A, const(2j * (adjoint(seq.alpha[n]) - adjoint(L2)))) <= 1e-9


def test_scalar_probe(ha6):
    p = MatrixPolynomial(np.array([1.0, 2.0, -1.0])[:, None, None] * np.eye(2))
    src = 1j * p
    for n in range(1, 5):
        c = ladder_coeffs(ha6, n, src)
        assert c.A_poly.max_abs_coeff() <= 1e-10
        assert pdiff(c.B_poly, -1j * p) <= 1e-10


# ---------------------------------------------------------------------------
# second-order equation

def test_ode_hermite_a(ha6):
    G = ha6.spec.G
    for n in range(1, 6):
        M, N = ode_coeffs(ha6, n)
        Mw = 2 * (ha6.alpha[n] - L2)
        for z in SAMPLES:
            g = G(z)
            Nw = -Mw @ g - g @ g + np.eye(2) + 4 * ha6.beta[n]
            assert np.max(np.abs(M(z) - Mw)) <= 1e-9
            assert np.max(np.abs(N(z) - Nw)) <= 1e-9


def test_ode_scalar_hermite(sh8):
    for n in range(1, 8):
        M, N = ode_coeffs(sh8, n)
        coeffs = np.polynomial.hermite.herm2poly([0] * n + [1]) / 2**n
        p = np.polynomial.Polynomial(coeffs)
        for z in SAMPLES:
            assert abs(M(z)[0, 0]) <= 1e-10
            assert abs(N(z)[0, 0] - (1 + 2 * n - z * z)) <= 1e-9
            # the monic Hermite polynomial solves y'' - 2 z y' + 2 n y = 0
            lhs = p.deriv(2)(z) - 2 * z * p.deriv()(z) + 2 * n * p(z)
            assert abs(lhs) <= 1e-9 * max(1, abs(p(z)))
            P = sh8.P(n)
            g = -z
            res = (P.derivative().derivative()(z) + 2 * P.derivative()(z) * g
                   + P(z) * (-1 + g * g) + M(z) @ P.derivative()(z) + N(z) @ P(z)
                   + M(z) @ P(z) * g)
            assert abs(res[0, 0]) <= 1e-10 * max(1, abs(p(z)))


def test_ode_hermite_b_zero_matches_scalar(sh8):
    seq = build_sequence(hermite_b([[0.0]]), 5)
    for n in range(1, 5):
        M1, N1 = ode_coeffs(seq, n)
        M2, N2 = ode_coeffs(sh8, n)
        for z in SAMPLES:
            assert np.allclose(M1(z), M2(z), atol=1e-10)
            assert np.allclose(N1(z), N2(z), atol=1e-9)


def test_ode_singular(ha6):
    src = 1j * const(np.eye(2))
    M, _ = ode_coeffs(ha6, 2, src)
    with pytest.raises(np.linalg.LinAlgError):
        M(0.5j)
    with pytest.raises(ValueError):
        ode_coeffs(ha6, 0)


def test_nilpotent_shift_case_weight(seq_factory):
    seq = seq_factory("case1-3", 6)
    assert np.array_equal(seq.spec.params["A"], nilpotent_shift([1, 1]))
