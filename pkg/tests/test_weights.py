import json
import math

import numpy as np
import pytest

from moprl.errors import DimensionMismatchError
from moprl.matpoly import MatrixPolynomial
from moprl.weights import (
    FAMILIES,
    ad,
    ad_condition_case,
    commutativity_probe,
    custom,
    example_spec,
    freud_a,
    freud_b,
    g_poly,
    hermite_a,
    hermite_b,
    ladder_diagonal,
    nilpotent_shift,
    poly_u,
    poly_u_validate,
    scalar_hermite,
    t_eval,
    weight_eval,
    weight_from_json,
    weight_to_json,
)

NIL = np.array([[0.0, 1.0], [0.0, 0.0]])
PROBE = (-3.0, -1.0, 0.0, 1.0, 3.0)


def sample_poly_u(a=(1, 1, 1, 1, 1, 1), b14=1.0):
    a12, a13, a14, a23, a24, a34 = a
    A1 = np.array([[0, a12, a13, a14], [0, 0, a23, a24], [0, 0, 0, a34], [0, 0, 0, 0]], float)
    A2 = np.zeros((4, 4))
    A2[0, 3] = b14
    A2[1, 3] = a23 * a34
    return A1, A2


def builtins():
    A1, A2 = sample_poly_u()
    return [
        scalar_hermite(),
        hermite_a(NIL),
        hermite_a(np.diag([1.0, 2.0])),
        hermite_b(0.3 * NIL),
        freud_a(NIL),
        freud_b(NIL),
        poly_u(A1, A2),
        example_spec("hermite-a", 3),
    ]


def test_scalar_hermite_at_zero():
    assert np.array_equal(weight_eval(scalar_hermite(), 0.0), [[1.0]])


@pytest.mark.parametrize("x", [-1.3, 0.0, 0.4, 2.0])
def test_hermite_a_nilpotent_closed_form(x):
    want = np.exp(-x * x) * np.array([[1 + x * x, x], [x, 1]])
    assert np.allclose(weight_eval(hermite_a(NIL), x), want, rtol=1e-14, atol=0)


def test_freud_b_zero_at_one():
    assert np.allclose(weight_eval(freud_b(np.zeros((2, 2))), 1.0), np.exp(-1) * np.eye(2),
                       rtol=1e-15, atol=0)


def test_t_eval_examples():
    assert np.array_equal(t_eval(hermite_a(NIL), 0.0), np.eye(2))
    z = 0.7 + 1.1j
    assert np.allclose(t_eval(hermite_a(NIL), z), np.exp(-z * z / 2) * (np.eye(2) + NIL * z),
                       rtol=1e-15, atol=0)
    A1, A2 = sample_poly_u()
    assert np.allclose(t_eval(poly_u(A1, A2), 1.0), np.exp(-0.5) * (np.eye(4) + A1 + A2),
                       rtol=1e-15, atol=0)


def test_t_eval_non_nilpotent_uses_expm():
    from scipy.linalg import expm
    A = np.array([[0.3, 1.0], [-0.2, 0.1]])
    z = 0.8
    assert np.allclose(t_eval(hermite_a(A), z), np.exp(-z * z / 2) * expm(A * z), rtol=1e-14)


def test_g_poly_closed_forms():
    I2 = np.eye(2)
    assert np.array_equal(g_poly(hermite_a(NIL)).coeffs, np.stack([NIL, -I2]))
    assert np.array_equal(g_poly(hermite_b(NIL)).coeffs, np.stack([0 * I2, 2 * NIL - I2]))
    assert np.array_equal(g_poly(freud_a(NIL)).coeffs, np.stack([NIL, 0 * I2, 0 * I2, -2 * I2]))
    fb = g_poly(freud_b(np.zeros((1, 1))))
    assert np.array_equal(fb.coeffs.ravel(), [0, 0, 0, -2])


def test_poly_u_g_has_degree_one_for_sample_example():
    A1, A2 = sample_poly_u()
    assert np.array_equal(A2 @ A1, np.zeros((4, 4)))
    G = g_poly(poly_u(A1, A2))
    assert G.degree == 1
    assert np.array_equal(G.coeff(1), 2 * A2 - A1 @ A1 - np.eye(4))


def test_poly_u_validate():
    z = np.zeros((2, 2))
    assert poly_u_validate(z, z)
    assert poly_u_validate(*sample_poly_u(a=(1, 2, -1, 3, 0.5, 2), b14=7.0))
    assert poly_u_validate(NIL, NIL)
    assert not poly_u_validate(NIL, np.array([[1.0, 0.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        poly_u(NIL, np.array([[1.0, 0.0], [0.0, 0.0]]))


def test_sample_poly_u_commutator():
    a = (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
    A1, A2 = sample_poly_u(a, b14=-1.0)
    want = np.zeros((4, 4))
    want[0, 3] = a[0] * a[3] * a[5]
    assert np.array_equal(ad(A1, A2), want)


def test_commutativity_probe():
    assert commutativity_probe(scalar_hermite(), [0.5, 1.0])["max_residual"] == 0.0
    assert commutativity_probe(hermite_a(np.diag([1.0, 2.0])), [0.5, 1.0, -2.0])["max_residual"] <= 1e-14
    assert commutativity_probe(hermite_a(NIL), [0.5, 1.0])["max_residual"] > 0.0


@pytest.mark.parametrize("spec", builtins(), ids=lambda s: f"{s.family}-{s.dim}")
def test_weight_hermitian_positive(spec):
    report = spec.validate(PROBE)
    assert report["hermitian_residual"] <= 1e-13
    assert report["min_eigenvalue"] > 0
    assert np.allclose(spec.w(0.0), np.eye(spec.dim), atol=1e-15)


@pytest.mark.parametrize("spec", builtins(), ids=lambda s: f"{s.family}-{s.dim}")
def test_t_solves_its_ode(spec):
    for x in (-1.0, 0.3, 1.2):
        r1 = spec.ode_residual(x, 1e-3)
        r2 = spec.ode_residual(x, 5e-4)
        assert r1 <= 1e-5
        # second-order accurate central difference: about a 4x reduction
        assert 3.0 < r1 / r2 < 5.0


@pytest.mark.parametrize("nu", [[1], [1, 1], [1, 1, 1], [2, -1, 0.5]])
@pytest.mark.parametrize("variant", ["case1", "case2"])
def test_ad_conditions_exact(variant, nu):
    case = ad_condition_case(variant, nu)
    first, second = case.ad_residuals()
    assert first == 0.0 and second == 0.0
    A, J = case.A, case.J
    want = -A if variant == "case1" else -A + A @ A
    assert np.array_equal(ad(A, case.chi), 1j * want)
    assert np.array_equal(ad(A, ad(A, case.chi)), np.zeros_like(A))
    x = 0.6
    from scipy.linalg import expm
    H = expm(A * x) @ case.chi @ expm(-A * x)
    assert np.allclose(case.h_poly()(x), H, atol=1e-13)


def test_case1_h_example():
    case = ad_condition_case("case1", [1])
    H = case.h_poly()
    assert np.array_equal(H.coeff(0), 1j * np.diag([1, 0]))
    assert np.array_equal(H.coeff(1), -1j * NIL)
    assert np.array_equal(case.A, nilpotent_shift([1]))
    assert np.array_equal(case.J, ladder_diagonal(2))


def test_case2_matrix():
    case = ad_condition_case("case2", [1, 1])
    L = case.L
    assert np.allclose(case.A, L @ np.linalg.inv(np.eye(3) + L), atol=1e-15)


def test_nilpotent_shift_rejects_zero():
    with pytest.raises(ValueError):
        nilpotent_shift([1, 0])


def test_custom_table_weight():
    grid = np.linspace(-1, 1, 5)
    T = np.stack([np.eye(2) * (1 - g * g) for g in grid])
    spec = custom(MatrixPolynomial.zero(2), grid=grid, T_values=T)
    assert spec.support == (-1.0, 1.0)
    assert np.allclose(spec.w(0.0), np.eye(2))
    assert np.allclose(spec.w(2.0), 0)
    with pytest.raises(DimensionMismatchError):
        custom(MatrixPolynomial.zero(3), grid=grid, T_values=T)


def test_json_roundtrip():
    for spec in builtins():
        obj = json.loads(json.dumps(weight_to_json(spec)))
        back = weight_from_json(obj)
        assert back.family == spec.family
        assert back.G == spec.G
    with pytest.raises(ValueError):
        weight_from_json({"family": "hermite-a"})
    with pytest.raises(ValueError):
        weight_from_json({"family": "nope"})


def test_example_spec_families():
    for fam in ("hermite-a", "hermite-b", "freud-a", "freud-b"):
        for dim in (1, 2, 3):
            assert example_spec(fam, dim).dim == dim
    assert "custom" in FAMILIES
    with pytest.raises(ValueError):
        example_spec("poly-u", 2)
