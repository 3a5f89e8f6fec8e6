"""Identity checks evaluated against a constructed ledger.

Polynomial identities are compared coefficient-wise; identities involving
Cauchy transforms or inverses of ladder coefficients are compared point-wise
at a fixed sample set. A residual is ``max |lhs - rhs| / max(1, max |lhs|, max |rhs|)``
(max-entry norm), i.e. absolute for quantities of order one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ladder import (
    e_matrix,
    f_matrix,
    f_matrix_via_expansion,
    frame_change,
    integral_f_matrix,
    ladder_coeffs,
    ode_coeffs,
    SINGULAR_TOL,
)
from .matpoly import MatrixPolynomial, adjoint, is_hermitian
from .mop import (
    TWO_PI_I,
    An,
    MopSequence,
    assemble_Y,
    assemble_Y_derivative,
    assemble_Y_pair,
    b_direct,
    cauchy_transform,
    cd_kernel,
    omega_inverse_b,
    orthogonality_residual,
    orthonormal,
    orthonormal_second,
    second_kind_direct,
)
from .weights import AdConditionCase, ad_condition_case, weight_to_json

__all__ = [
    "CheckResult",
    "VerificationReport",
    "CHECKS",
    "FIXED_SAMPLES",
    "sample_points",
    "detect_ad_case",
    "run_checks",
    "check_recurrence",
    "check_orthogonality",
    "check_lof",
    "check_hp",
    "check_cd",
    "check_anbn",
    "check_b",
    "check_second_kind",
    "check_rhp",
    "check_string",
    "check_ladders",
    "check_second_order",
    "check_lax",
    "check_f_expansion",
    "check_integral_frame",
    "check_closed_forms",
    "check_freud_string",
    "check_ad_case",
    "check_scalar_probe",
    "check_realness",
]

FIXED_SAMPLES = (0.3 + 0.7j, -1.2 + 0.4j, 2.1 - 1.5j)
LOF_SAMPLES = (0.3, 1.7 + 0.5j, -2.1)
CD_PAIRS = ((0.3, -0.7), (1.1, 0.4), (-1.6, 0.9))
REAL_SAMPLES = (-1.3, 0.2, 0.9)

IDENTITY_TOL = 1e-8
FREUD_TOL = 1e-6
EXPANSION_TOL = 1e-9
INTEGRAL_TOL = 1e-6
CASE2_TOL = 1e-7
CLOSED_FORM_TOL = 1e-10
REAL_TOL = 1e-10
LINEARITY_TOL = 1e-13


@dataclass
class CheckResult:
    name: str
    anchor: str
    residual: float | None
    tol: float
    samples: tuple = ()
    skip: str | None = None

    @property
    def passed(self) -> bool:
        if self.skip is not None:
            return True
        return self.residual is not None and bool(self.residual <= self.tol)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "anchor": self.anchor,
            "residual": None if self.residual is None else float(self.residual),
            "tol": float(self.tol),
            "pass": self.passed,
        }
        if self.samples:
            out["samples"] = [[float(np.real(z)), float(np.imag(z))] for z in self.samples]
        if self.skip is not None:
            out["skip"] = self.skip
        return out


@dataclass
class VerificationReport:
    spec: dict
    n_range: tuple[int, int]
    tol: float
    seed: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def by_name(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "spec": self.spec,
            "n_range": list(self.n_range),
            "tol": self.tol,
            "seed": self.seed,
            "all_pass": self.all_passed,
            "checks": [c.to_json() for c in self.checks],
        }


# ---------------------------------------------------------------------------
# helpers

def _scale(*arrs) -> float:
    return max([1.0] + [float(np.max(np.abs(a), initial=0.0)) for a in arrs])


def _mres(lhs, rhs) -> float:
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    return float(np.max(np.abs(lhs - rhs), initial=0.0)) / _scale(lhs, rhs)


def _pres(lhs: MatrixPolynomial, rhs: MatrixPolynomial) -> float:
    n = max(len(lhs.coeffs), len(rhs.coeffs))
    return _mres(lhs.padded(n), rhs.padded(n))


def _const(m) -> MatrixPolynomial:
    return MatrixPolynomial.constant(m)


def _zmin(seq: MopSequence, a) -> MatrixPolynomial:
    """``z I - a``."""
    return MatrixPolynomial(np.stack([-np.asarray(a), np.eye(seq.dim)]))


def _x(seq: MopSequence) -> MatrixPolynomial:
    return MatrixPolynomial.monomial(1, np.eye(seq.dim))


def sample_points(seed: int, extra: int = 2) -> list[complex]:
    """The fixed off-axis samples followed by ``extra`` seeded random ones."""
    rng = np.random.default_rng(seed)
    pts = list(FIXED_SAMPLES)
    for _ in range(extra):
        pts.append(_random_point(rng))
    return pts


def _random_point(rng) -> complex:
    re = rng.uniform(-2.0, 2.0)
    im = rng.uniform(0.3, 1.5) * rng.choice([-1.0, 1.0])
    return complex(re, im)


def _random_poly(rng, dim: int, degree: int) -> MatrixPolynomial:
    c = rng.normal(size=(degree + 1, dim, dim)) + 1j * rng.normal(size=(degree + 1, dim, dim))
    return MatrixPolynomial(c)


@dataclass
class _Ctx:
    seq: MopSequence
    seed: int
    samples: list[complex]
    case: AdConditionCase | None

    @property
    def n_max(self) -> int:
        return self.seq.n_max

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])


def detect_ad_case(seq: MopSequence) -> AdConditionCase | None:
    """Recognise ``A = L`` or ``A = L (I + L)^{-1}`` for a Hermite-A weight."""
    spec = seq.spec
    if spec.family != "hermite-a" or spec.dim < 2:
        return None
    A = spec.params["A"]
    N = A.shape[0]
    eye = np.eye(N)
    for variant in ("case1", "case2"):
        L = A if variant == "case1" else A @ np.linalg.inv(eye - A)
        nu = np.diag(L, k=1)
        if np.any(nu == 0) or np.max(np.abs(L - np.diag(nu, k=1))) > 1e-14:
            continue
        case = ad_condition_case(variant, nu)
        if np.max(np.abs(case.A - A)) <= 1e-14:
            return case
    return None


# ---------------------------------------------------------------------------
# ledger identities

def check_recurrence(ctx: _Ctx) -> list[CheckResult]:
    seq = ctx.seq
    worst = 0.0
    for n in range(seq.n_max):
        rhs = seq.P(n + 1) + seq.alpha[n] * seq.P(n)
        if n >= 1:
            rhs = rhs + seq.beta[n] * seq.P(n - 1)
        worst = max(worst, _pres(seq.P(n).shift(1), rhs))
    return [CheckResult("recurrence", "three-term recurrence of the monic polynomials",
                        worst, IDENTITY_TOL)]


def check_orthogonality(ctx: _Ctx) -> list[CheckResult]:
    seq = ctx.seq
    out = [CheckResult("orthogonality", "moments of P_n against x^j, j < n, vanish",
                       orthogonality_residual(seq), 50 * seq.tol)]
    worst_g = 0.0
    worst_b = 0.0
    worst_k = 0.0
    pd = True
    for n in range(seq.n_max + 1):
        g = seq.gamma[n]
        pd = pd and is_hermitian(g) and np.linalg.eigvalsh(g)[0] > 0
        worst_b = max(worst_b, _mres(g @ b_direct(seq, n, n), np.eye(seq.dim)))
        k = seq.kappa[n]
        worst_k = max(worst_k, _mres(adjoint(k) @ k, g))
        worst_g = max(worst_g, float(np.max(np.abs(seq.P(n).coeffs[-1] - np.eye(seq.dim)))))
    out.append(CheckResult("monic_leading", "leading coefficient of P_n is exactly I", worst_g, 0.0))
    out.append(CheckResult("gamma_positive", "gamma_n Hermitian positive definite",
                           0.0 if pd else 1.0, 0.0))
    out.append(CheckResult("gamma_b", "gamma_n b_{n,n} = I", worst_b, IDENTITY_TOL))
    out.append(CheckResult("kappa_root", "kappa_n* kappa_n = gamma_n", worst_k, IDENTITY_TOL))
    return out


def _lof_value(seq, n, z):
    P, Pm = orthonormal(seq, n), orthonormal(seq, n - 1)
    Q, Qm = orthonormal_second(seq, n), orthonormal_second(seq, n - 1)
    return Q(z) @ Pm.adjoint()(z) - P(z) @ Qm.adjoint()(z)


def check_lof(ctx: _Ctx) -> list[CheckResult]:
    seq = ctx.seq
    worst = 0.0
    spread = 0.0
    for n in range(1, seq.n_max + 1):
        target = np.linalg.inv(An(seq, n))
        vals = [_lof_value(seq, n, z) for z in LOF_SAMPLES]
        worst = max(worst, *(_mres(v, target) for v in vals))
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                spread = max(spread, _mres(vals[i], vals[j]))
    return [
        CheckResult("lof", "Liouville-Ostrogradski formula Q_n P*_{n-1} - P_n Q*_{n-1} = A_n^{-1}",
                    worst, IDENTITY_TOL, LOF_SAMPLES),
        CheckResult("lof_z_independence", "Liouville-Ostrogradski left side is constant in z",
                    spread, IDENTITY_TOL, LOF_SAMPLES),
    ]


def check_hp(ctx: _Ctx) -> list[CheckResult]:
    seq = ctx.seq
    worst = 0.0
    for n in range(seq.n_max + 1):
        P, Q = orthonormal(seq, n), orthonormal_second(seq, n)
        for z in LOF_SAMPLES:
            worst = max(worst, _mres(Q(z) @ P.adjoint()(z), P(z) @ Q.adjoint()(z)))
    return [CheckResult("hp", "Hermitian property Q_n P_n* = P_n Q_n*", worst, IDENTITY_TOL,
                        LOF_SAMPLES)]


def check_cd(ctx: _Ctx) -> list[CheckResult]:
    seq = ctx.seq
    worst = 0.0
    for n in range(1, seq.n_max + 1):
        for x, y in CD_PAIRS:
            worst = max(worst, _mres(cd_kernel(seq, n, x, y, "sum"), cd_kernel(seq, n, x, y, "cd")))
    herm = 0.0
    for n in range(1, seq.n_max + 1):
        A = An(seq, n)
        P, Pm = orthonormal(seq, n), orthonormal(seq, n - 1)
        Q, Qm = orthonormal_second(seq, n), orthonormal_second(seq, n - 1)
        for x in REAL_SAMPLES:
            m1 = Pm.adjoint()(x) @ A @ P(x)
            m2 = Qm.adjoint()(x) @ A @ Q(x)
            herm = max(herm, _mres(m1, adjoint(m1)), _mres(m2, adjoint(m2)))
    return [
        CheckResult("cd", "Christoffel-Darboux kernel: direct sum equals closed form", worst,
                    IDENTITY_TOL),
        CheckResult("cd_hermitian", "P*_{n-1} A_n P_n and Q*_{n-1} A_n Q_n Hermitian on the real line",
                    herm, IDENTITY_TOL, REAL_SAMPLES),
    ]


def check_anbn(ctx: _Ctx) -> list[CheckResult]:
    seq = ctx.seq
    w1 = w2 = 0.0
    for m in (1, 2, 3):
        for n in range(1, seq.n_max + 1):
            l1 = sum(seq.coef(n, n - m + j) @ adjoint(seq.b(n - 1, n + j - 1)) for j in range(m + 1))
            r1 = sum(seq.b(n, n + m - j - 1) @ adjoint(seq.coef(n - 1, n - j)) for j in range(m + 1))
            l2 = sum(seq.coef(n, n - m + j) @ adjoint(seq.b(n, n + j - 1)) for j in range(m + 1))
            r2 = sum(seq.b(n, n + m - j - 1) @ adjoint(seq.coef(n, n - j)) for j in range(m + 1))
            w1 = max(w1, _mres(l1, r1))
            w2 = max(w2, _mres(l2, r2))
    return [
        CheckResult("anbn1", "a/b relation from block (1,1) of Y Y^{-1} = I, m = 1..3", w1,
                    IDENTITY_TOL),
        CheckResult("anbn2", "a/b relation from block (1,2) of Y Y^{-1} = I, m = 1..3", w2,
                    IDENTITY_TOL),
    ]


def check_b(ctx: _Ctx) -> list[CheckResult]:
    seq = ctx.seq
    worst = 0.0
    closed = 0.0
    a = lambda n, j: adjoint(seq.coef(n, j))  # noqa: E731
    for n in range(seq.n_max + 1):
        bs = omega_inverse_b(seq, n)
        for k in range(n + 1):
            worst = max(worst, _mres(bs[k], b_direct(seq, n - k, n)))
        g = seq.gamma
        forms = [(0, np.eye(seq.dim))]
        if n >= 1:
            forms.append((1, -a(n, n - 1)))
        if n >= 2:
            forms.append((2, a(n - 1, n - 2) @ a(n, n - 1) - a(n, n - 2)))
        if n >= 3:
            forms.append((3, -a(n - 2, n - 3) @ a(n - 1, n - 2) @ a(n, n - 1)
                          + a(n - 1, n - 3) @ a(n, n - 1) + a(n - 2, n - 3) @ a(n, n - 2)
                          - a(n, n - 3)))
        for k, val in forms:
            closed = max(closed, _mres(g[n - k] @ bs[k], val))
    return [
        CheckResult("b_omega", "b_{n-k,n} from the inverse of the coefficient triangle equals "
                    "the moment contraction", worst, IDENTITY_TOL),
        CheckResult("b_closed_forms", "gamma_{n-k} b_{n-k,n} closed forms, k = 0..3", closed,
                    IDENTITY_TOL),
    ]


def check_second_kind(ctx: _Ctx) -> list[CheckResult]:
    seq = ctx.seq
    worst = 0.0
    for n in range(seq.n_max + 1):
        for x in LOF_SAMPLES:
            worst = max(worst, _mres(seq.Q(n)(x), second_kind_direct(seq, n, x)))
    base = _mres(seq.Q(0).coeffs, 0 * seq.Q(0).coeffs) + _mres(seq.Q(1).coeffs[0], seq.moments[0])
    degs = all(seq.Q(n).degree == n - 1 for n in range(1, seq.n_max + 1))
    z = 1 + 1j
    cw = cauchy_transform(seq, z)
    cauchy = 0.0
    for n in range(1, min(seq.n_max, 3) + 1):
        P = orthonormal(seq, n)
        lhs = TWO_PI_I * cauchy_transform(seq, z, P)
        rhs = orthonormal_second(seq, n)(z) + TWO_PI_I * P(z) @ cw
        cauchy = max(cauchy, _mres(lhs, rhs))
    return [
        CheckResult("second_kind", "second-kind recurrence agrees with the difference-quotient "
                    "integral", worst, IDENTITY_TOL, LOF_SAMPLES),
        CheckResult("second_kind_initial", "Q_0 = 0, Q_1 = mu_0, deg Q_n = n - 1",
                    base + (0.0 if degs else 1.0), IDENTITY_TOL),
        CheckResult("cauchy_second_kind", "2 pi i C(P_n W) = Q_n + 2 pi i P_n C(W)", cauchy,
                    IDENTITY_TOL, (z,)),
    ]


def check_rhp(ctx: _Ctx) -> list[CheckResult]:
    seq = ctx.seq
    det = inv = 0.0
    eye = np.eye(2 * seq.dim)
    for n in range(seq.n_max + 1):
        for z in ctx.samples:
            Y, Yi = assemble_Y_pair(seq, n, z)
            det = max(det, abs(np.linalg.det(Y) - 1.0))
            inv = max(inv, _mres(Y @ Yi, eye))
    return [
        CheckResult("rhp_det", "det Y^n(z) = 1", det, IDENTITY_TOL, tuple(ctx.samples)),
        CheckResult("rhp_inverse", "Y^n(z) times its closed-form inverse is I", inv, IDENTITY_TOL,
                    tuple(ctx.samples)),
    ]


# ---------------------------------------------------------------------------
# ladder identities

def _ladders(seq, source, top):
    return {n: ladder_coeffs(seq, n, source) for n in range(top + 1)}


def check_string(ctx: _Ctx, source=None, prefix: str = "") -> list[CheckResult]:
    seq = ctx.seq
    L = _ladders(seq, source, seq.n_max)
    eye = _const(np.eye(seq.dim))
    w11 = w21 = 0.0
    for n in range(1, seq.n_max):
        za = _zmin(seq, seq.alpha[n])
        lhs = eye + L[n + 1].B_poly * za - za * L[n].B_poly
        rhs = L[n + 1].A_poly.adjoint() * seq.beta[n + 1] - seq.beta[n] * L[n - 1].A_poly.adjoint()
        w11 = max(w11, _pres(lhs, rhs))
        g, gi = seq.gamma[n], seq.gamma_inv[n]
        lhs = L[n + 1].B_poly + gi * L[n].B_poly.adjoint() * g
        rhs = za * L[n].A_poly.adjoint()
        w21 = max(w21, _pres(lhs, rhs))
    return [
        CheckResult(prefix + "string11", "compatibility condition from block (1,1) of the Lax pair",
                    w11, IDENTITY_TOL),
        CheckResult(prefix + "string21", "compatibility condition from block (1,2) of the Lax pair",
                    w21, IDENTITY_TOL),
    ]


def check_ladders(ctx: _Ctx, source=None, prefix: str = "") -> list[CheckResult]:
    seq = ctx.seq
    G = seq.spec.G if source is None else source
    L = _ladders(seq, source, seq.n_max)
    low = rai = sym = 0.0
    for n in range(1, seq.n_max + 1):
        P = seq.P(n)
        lhs = P.derivative() + P * G
        As = L[n].A_poly.adjoint()
        low = max(low, _pres(lhs, -(L[n].B_poly * P) + As * seq.beta[n] * seq.P(n - 1)))
        if n < seq.n_max:
            za = _zmin(seq, seq.alpha[n])
            rhs = (As * za - L[n].B_poly) * P - As * seq.P(n + 1)
            rai = max(rai, _pres(lhs, rhs))
    for n in range(seq.n_max + 1):
        g = seq.gamma[n]
        sym = max(sym, _pres(g * L[n].A_poly.adjoint(), L[n].A_poly * g))
    # linearity in the source, with a seeded random companion
    H = _random_poly(ctx.rng(11), seq.dim, max(G.degree, 1))
    lin = 0.0
    for n in range(1, seq.n_max + 1):
        c1, c2, c3 = ladder_coeffs(seq, n, G), ladder_coeffs(seq, n, H), ladder_coeffs(seq, n, G + H)
        lin = max(lin, _pres(c3.A_poly, c1.A_poly + c2.A_poly), _pres(c3.B_poly, c1.B_poly + c2.B_poly))
    return [
        CheckResult(prefix + "lowering", "lowering operator P_n' + P_n G = -B_n P_n + A_n* beta_n "
                    "P_{n-1}", low, IDENTITY_TOL),
        CheckResult(prefix + "raising", "raising operator P_n' + P_n G = (A_n*(z - alpha_n) - B_n) "
                    "P_n - A_n* P_{n+1}", rai, IDENTITY_TOL),
        CheckResult(prefix + "a_symmetry", "gamma_n A_n* = A_n gamma_n", sym, IDENTITY_TOL),
        CheckResult(prefix + "linearity", "ladder coefficients are linear in the source polynomial",
                    lin, LINEARITY_TOL),
    ]


def _second_order_residual(seq, n, source, z, Mf, Nf):
    G = seq.spec.G if source is None else source
    P = seq.P(n)
    p, dp, ddp = P(z), P.derivative()(z), P.derivative().derivative()(z)
    g, dg = G(z), G.derivative()(z)
    M, Nn = Mf(z), Nf(z)
    lhs = ddp + 2 * dp @ g + p @ (dg + g @ g) + M @ dp + Nn @ p + M @ p @ g
    return float(np.max(np.abs(lhs))) / _scale(ddp, 2 * dp @ g, p @ (dg + g @ g), M @ dp, Nn @ p,
                                               M @ p @ g)


def check_second_order(ctx: _Ctx, source=None) -> list[CheckResult]:
    seq = ctx.seq
    rng = ctx.rng(23)
    worst = 0.0
    used = []
    for n in range(1, seq.n_max):
        Mf, Nf = ode_coeffs(seq, n, source)
        for z in ctx.samples:
            for _ in range(20):
                try:
                    r = _second_order_residual(seq, n, source, z, Mf, Nf)
                    break
                except np.linalg.LinAlgError:
                    z = _random_point(rng)
            else:
                return [CheckResult("second_order", "second-order differential equation", None,
                                    IDENTITY_TOL, skip="A_n* singular at every sample")]
            worst = max(worst, r)
            if z not in used:
                used.append(z)
    return [CheckResult("second_order", "second-order differential equation with M_n, N_n",
                        worst, IDENTITY_TOL, tuple(used))]


def check_lax(ctx: _Ctx, source=None) -> list[CheckResult]:
    seq = ctx.seq
    N = seq.dim
    dE = np.zeros((2 * N, 2 * N), dtype=complex)
    dE[:N, :N] = np.eye(N)
    worst = 0.0
    for n in range(1, seq.n_max):
        for z in ctx.samples:
            E = e_matrix(seq, n, z)
            lhs = dE + E @ f_matrix(seq, n, z, source)
            rhs = f_matrix(seq, n + 1, z, source) @ E
            worst = max(worst, _mres(lhs, rhs))
    return [CheckResult("lax", "Lax compatibility E_n' + E_n F_n = F_{n+1} E_n", worst,
                        IDENTITY_TOL, tuple(ctx.samples))]


def _expansion_sources(ctx: _Ctx) -> dict[int, MatrixPolynomial]:
    seq = ctx.seq
    rng = ctx.rng(31)
    G = seq.spec.G
    out = {}
    for m in (0, 1, 2):
        out[m] = G if G.degree == m else _random_poly(rng, seq.dim, m)
    return out


def check_f_expansion(ctx: _Ctx) -> list[CheckResult]:
    seq = ctx.seq
    out = []
    sources = _expansion_sources(ctx)
    for m, src in sources.items():
        worst = 0.0
        for n in range(1, seq.n_max + 1):
            for z in FIXED_SAMPLES:
                worst = max(worst, _mres(f_matrix(seq, n, z, src), f_matrix_via_expansion(seq, n, z, src)))
        out.append(CheckResult(f"f_expansion_m{m}", "F_n from ladder coefficients equals the "
                               "polynomial part of Y diag(G, -G*) Y^{-1}", worst, EXPANSION_TOL,
                               FIXED_SAMPLES))
    # explicit low-degree forms
    N = seq.dim
    eye = np.eye(N)
    M0 = sources[0].coeff(0)
    r0 = 0.0
    for n in range(1, seq.n_max + 1):
        for z in FIXED_SAMPLES:
            want = np.block([[M0, 0 * eye], [0 * eye, -adjoint(M0)]])
            r0 = max(r0, _mres(f_matrix(seq, n, z, sources[0]), want))
    G1 = sources[1]
    M1 = G1.coeff(1)
    r1 = 0.0
    for n in range(1, seq.n_max + 1):
        a = seq.coef(n, n - 1)
        g, gi, gm = seq.gamma[n], seq.gamma_inv[n], seq.gamma[n - 1]
        for z in FIXED_SAMPLES:
            want = np.block([
                [G1(z) + a @ M1 - M1 @ a, (gi @ adjoint(M1) + M1 @ gi) / TWO_PI_I],
                [-TWO_PI_I * (gm @ M1 + adjoint(M1) @ gm),
                 -G1.adjoint()(z) + adjoint(a) @ adjoint(M1) - adjoint(M1) @ adjoint(a)],
            ])
            r1 = max(r1, _mres(f_matrix(seq, n, z, G1), want))
    G2 = sources[2]
    M1, M2 = G2.coeff(1), G2.coeff(2)
    x = _x(seq)
    r2 = 0.0
    for n in range(1, seq.n_max):
        a1 = seq.coef(n, n - 1)
        a2 = seq.coef(n, n - 2)
        b1 = seq.coef(n + 1, n)
        b2 = seq.coef(n + 1, n - 1)
        g, gi, gm = seq.gamma[n], seq.gamma_inv[n], seq.gamma[n - 1]
        B_want = (-G2 - x * (a1 @ M2 - M2 @ a1)
                  + _const(M1 @ a1 - a1 @ M1 - a2 @ M2 - M2 @ (b1 @ a1 - b2) + a1 @ M2 @ a1
                           - gi @ adjoint(M2) @ gm))
        A_want = (-(x * adjoint(M2)) + _const(-adjoint(M1) + adjoint(b1) @ adjoint(M2)
                                               - adjoint(M2) @ adjoint(a1))
                  - g * (x * M2 + _const(M1 - M2 @ b1 + a1 @ M2)) * gi)
        c = ladder_coeffs(seq, n, G2)
        r2 = max(r2, _pres(c.B_poly, B_want), _pres(c.A_poly, A_want))
    out += [
        CheckResult("f_form_m0", "constant source gives F_n = diag(M_0, -M_0*)", r0, EXPANSION_TOL),
        CheckResult("f_form_m1", "explicit F_n for a degree-one source", r1, EXPANSION_TOL),
        CheckResult("ladder_form_m2", "explicit A_n, B_n for a degree-two source", r2,
                    EXPANSION_TOL),
    ]
    return out


def check_integral_frame(ctx: _Ctx) -> list[CheckResult]:
    seq = ctx.seq
    z = 1 + 1j
    deq = frame = 0.0
    for n in (1, 2):
        if n > seq.n_max:
            break
        dY = assemble_Y_derivative(seq, n, z)
        F = integral_f_matrix(seq, n, z)
        deq = max(deq, _mres(dY, F @ assemble_Y(seq, n, z)))
        frame = max(frame, _mres(f_matrix(seq, n, z), F + frame_change(seq, n, z)))
    return [
        CheckResult("integral_deq", "dY^n/dz equals the integral-coefficient matrix times Y^n", deq,
                    INTEGRAL_TOL, (z,)),
        CheckResult("integral_frame", "polynomial F_n equals integral matrix plus "
                    "Y diag(G, -G*) Y^{-1}", frame, INTEGRAL_TOL, (z,)),
    ]


def check_scalar_probe(ctx: _Ctx) -> list[CheckResult]:
    """``chi = i p(z) I`` gives ``H = i p I``, ``A_n(H) = 0`` and ``B_n(H) = -i p I``."""
    seq = ctx.seq
    rng = ctx.rng(41)
    p = rng.normal(size=3)
    H = MatrixPolynomial(np.stack([1j * c * np.eye(seq.dim) for c in p]))
    worst = 0.0
    for n in range(1, seq.n_max + 1):
        c = ladder_coeffs(seq, n, H)
        worst = max(worst, _pres(c.A_poly, MatrixPolynomial.zero(seq.dim)), _pres(c.B_poly, -H))
    return [CheckResult("scalar_probe", "scalar chi gives A_n(H) = 0 and B_n(H) = -i p I", worst,
                        IDENTITY_TOL)]


def check_realness(ctx: _Ctx) -> list[CheckResult]:
    seq = ctx.seq
    spec = seq.spec
    if spec.family == "custom" or any(np.any(np.imag(v) != 0) for v in spec.params.values()):
        return [CheckResult("realness", "a and b coefficients are real for real parameters", None,
                            REAL_TOL, skip="parameters are not real")]
    worst = 0.0
    for n in range(seq.n_max + 1):
        if n:
            worst = max(worst, float(np.max(np.abs(np.imag(seq.a[n])))))
        for k in range(n, min(2 * seq.n_max - 1, seq.max_b_order(n)) + 1):
            worst = max(worst, float(np.max(np.abs(np.imag(seq.b(n, k))))) / _scale(seq.b(n, k)))
    return [CheckResult("realness", "a and b coefficients are real for real parameters", worst,
                        REAL_TOL)]


# ---------------------------------------------------------------------------
# family closed forms

def _hermite_a_forms(seq: MopSequence) -> list[CheckResult]:
    A = seq.spec.params["A"]
    As = adjoint(A)
    N = seq.dim
    eye = np.eye(N)
    x = _x(seq)
    G = seq.spec.G
    lad = _ladders(seq, None, seq.n_max)
    ab = comp1 = comp2 = betas = low = rai = secs = 0.0
    for n in range(seq.n_max + 1):
        ab = max(ab, _pres(lad[n].A_poly, _const(2 * eye)))
        if n >= 1:
            ab = max(ab, _pres(lad[n].B_poly, x - A))
    for n in range(seq.n_max):
        al = seq.alpha[n]
        comp1 = max(comp1, _mres(2 * (seq.beta[n + 1] - seq.beta[n]), eye + A @ al - al @ A))
        comp2 = max(comp2, _mres(al, 0.5 * (A + seq.gamma_inv[n] @ As @ seq.gamma[n])))
    for n in range(1, seq.n_max + 1):
        a = seq.coef(n, n - 1)
        betas = max(betas, _mres(seq.beta[n], 0.5 * (n * eye + a @ A - A @ a)))
        P = seq.P(n)
        dP = P.derivative()
        low = max(low, _pres(dP + P * A - A * P, 2 * seq.beta[n] * seq.P(n - 1)))
        if n < seq.n_max:
            al = seq.alpha[n]
            lhs = -dP + 2 * x * P + A * P - P * A - 2 * al * P
            rai = max(rai, _pres(lhs, 2 * seq.P(n + 1)))
            lhs = P.derivative().derivative() + dP * (A - x) + dP * (A - x) + P * (A @ A - 2 * x * A)
            rhs = (_const(A @ A - 4 * seq.beta[n]) - 2 * x * A) * P + 2 * (A - al) * (dP + P * A - A * P)
            secs = max(secs, _pres(lhs, rhs))
    mn = 0.0
    for n in range(1, seq.n_max):
        Mf, Nf = ode_coeffs(seq, n)
        al = seq.alpha[n]
        for z in FIXED_SAMPLES:
            g = G(z)
            mn = max(mn, _mres(Mf(z), 2 * (al - A)),
                     _mres(Nf(z), -2 * (al - A) @ g - g @ g + eye + 4 * seq.beta[n]))
    return [
        CheckResult("hermite_a_ladder", "A_n = 2I and B_n = xI - A", ab, CLOSED_FORM_TOL),
        CheckResult("hermite_a_comp1", "2(beta_{n+1} - beta_n) = I + A alpha_n - alpha_n A", comp1,
                    IDENTITY_TOL),
        CheckResult("hermite_a_comp2", "alpha_n = (A + gamma_n^{-1} A* gamma_n)/2", comp2,
                    IDENTITY_TOL),
        CheckResult("hermite_a_betas", "beta_n = (nI + a_{n,n-1} A - A a_{n,n-1})/2", betas,
                    IDENTITY_TOL),
        CheckResult("hermite_a_lowering", "P_n' + P_n A - A P_n = 2 beta_n P_{n-1}", low,
                    IDENTITY_TOL),
        CheckResult("hermite_a_raising", "-P_n' + 2x P_n + A P_n - P_n A - 2 alpha_n P_n = 2 P_{n+1}",
                    rai, IDENTITY_TOL),
        CheckResult("hermite_a_mn", "M_n = 2(alpha_n - A), N_n = -2(alpha_n - A)G - G^2 + I + "
                    "4 beta_n", mn, IDENTITY_TOL, FIXED_SAMPLES),
        CheckResult("hermite_a_second_order", "explicit second-order equation for the Hermite-A "
                    "weight", secs, IDENTITY_TOL),
    ]


def _hermite_b_forms(seq: MopSequence) -> list[CheckResult]:
    B = seq.spec.params["B"]
    Bs = adjoint(B)
    eye = np.eye(seq.dim)
    x = _x(seq)
    lad = _ladders(seq, None, seq.n_max)

    def C(n):
        return eye - B - seq.gamma_inv[n] @ Bs @ seq.gamma[n]

    ab = comp = beta = low = rai = sec = 0.0
    for n in range(seq.n_max + 1):
        g, gi = seq.gamma[n], seq.gamma_inv[n]
        ab = max(ab, _pres(lad[n].A_poly, _const(2 * (eye - Bs - g @ B @ gi))))
        if n >= 1:
            ab = max(ab, _pres(lad[n].B_poly, x * (eye - 2 * B)))
    for n in range(1, seq.n_max):
        lhs = 2 * C(n + 1) @ seq.beta[n + 1] - 2 * seq.beta[n] @ C(n - 1)
        comp = max(comp, _mres(lhs, eye))
    for n in range(1, seq.n_max + 1):
        a2 = seq.coef(n, n - 2)
        beta = max(beta, _mres(2 * C(n) @ seq.beta[n], n * eye + 2 * (a2 @ B - B @ a2)))
        P = seq.P(n)
        lhs = P.derivative() + 2 * x * (P * B - B * P)
        low = max(low, _pres(lhs, 2 * C(n) @ seq.beta[n] * seq.P(n - 1)))
        if n < seq.n_max:
            rai = max(rai, _pres(lhs, 2 * C(n) * (x * P - seq.P(n + 1))))
    for n in range(1, seq.n_max + 1):
        if n < 1:
            continue
        Cn = C(n)
        if np.linalg.svd(Cn, compute_uv=False)[-1] <= SINGULAR_TOL:
            continue
        Ln = Cn @ B @ np.linalg.inv(Cn)
        Kn = Cn @ seq.beta[n] @ C(n - 1)
        S = seq.gamma_inv[n] @ Bs @ seq.gamma[n] - Ln
        P = seq.P(n)
        dP, ddP = P.derivative(), P.derivative().derivative()
        x2 = x * x
        lhs = (ddP + 2 * x * dP * (2 * B - eye) + 2 * x * S * dP + 4 * x2 * (P * (B @ B) - (B @ B) * P)
               + 4 * Kn * P + (2 * _const(eye) - 4 * x2 + 4 * x2 * S) * (P * B - B * P))
        sec = max(sec, _pres(lhs, MatrixPolynomial.zero(seq.dim)) / _scale(ddP.coeffs, (4 * Kn * P).coeffs))
    return [
        CheckResult("hermite_b_ladder", "A_n = 2(I - B* - gamma_n B gamma_n^{-1}), B_n = (I - 2B)x",
                    ab, CLOSED_FORM_TOL),
        CheckResult("hermite_b_compat", "single compatibility condition for the Hermite-B weight",
                    comp, IDENTITY_TOL),
        CheckResult("hermite_b_beta", "2(I - B - gamma_n^{-1} B* gamma_n) beta_n = nI + "
                    "2(a_{n,n-2} B - B a_{n,n-2})", beta, IDENTITY_TOL),
        CheckResult("hermite_b_lowering", "lowering operator for the Hermite-B weight", low,
                    IDENTITY_TOL),
        CheckResult("hermite_b_raising", "raising operator for the Hermite-B weight", rai,
                    IDENTITY_TOL),
        CheckResult("hermite_b_second_order", "explicit second-order equation for the Hermite-B "
                    "weight", sec, IDENTITY_TOL),
    ]


def _freud_a_forms(seq: MopSequence) -> list[CheckResult]:
    A = seq.spec.params["A"]
    As = adjoint(A)
    eye = np.eye(seq.dim)
    x = _x(seq)
    al, be = seq.alpha, seq.beta
    lad = _ladders(seq, None, seq.n_max)
    ab = bf1 = c1 = c2 = low = rai = 0.0
    for n in range(1, seq.n_max):
        Apoly = 4 * (x * x + x * al[n] + _const(be[n + 1] + be[n] + al[n] @ al[n])).adjoint()
        Bpoly = 2 * x * x * x + 4 * (x * be[n] + _const(be[n] @ al[n - 1] + al[n] @ be[n])) - A
        ab = max(ab, _pres(lad[n].A_poly, Apoly), _pres(lad[n].B_poly, Bpoly))
        a = seq.coef(n, n - 1)
        lhs = n * eye + a @ A - A @ a
        rhs = 4 * (be[n] @ be[n - 1] + be[n] @ al[n - 1] @ al[n - 1] + al[n] @ be[n] @ al[n - 1]
                   + be[n + 1] @ be[n] + be[n] @ be[n] + al[n] @ al[n] @ be[n])
        bf1 = max(bf1, _mres(lhs, rhs))
        P = seq.P(n)
        lhs = P.derivative() + P * A - A * P
        rhs = (-4 * (x * be[n] + _const(be[n] @ al[n - 1] + al[n] @ be[n])) * P
               + 4 * (x * x + x * al[n] + _const(be[n + 1] + be[n] + al[n] @ al[n])) * be[n] * seq.P(n - 1))
        low = max(low, _pres(lhs, rhs))
        S = be[n + 1] + be[n] + al[n] @ al[n]
        rhs = (4 * (x * x * x + x * be[n + 1] - _const(S @ al[n] + be[n] @ al[n - 1] + al[n] @ be[n])) * P
               - 4 * (x * x + x * al[n] + _const(S)) * seq.P(n + 1))
        rai = max(rai, _pres(lhs, rhs))
    for n in range(1, seq.n_max - 1):
        lhs = (eye + A @ al[n] - al[n] @ A - 4 * (be[n + 1] @ al[n] + al[n + 1] @ be[n + 1]) @ al[n]
               + 4 * al[n] @ (be[n] @ al[n - 1] + al[n] @ be[n]))
        rhs = (4 * (be[n + 2] + be[n + 1] + al[n + 1] @ al[n + 1]) @ be[n + 1]
               - 4 * be[n] @ (be[n] + be[n - 1] + al[n - 1] @ al[n - 1]))
        c1 = max(c1, _mres(lhs, rhs))
        lhs = 4 * ((be[n + 1] + be[n] + al[n] @ al[n]) @ al[n] + al[n] @ (be[n + 1] + be[n])
                   + al[n + 1] @ be[n + 1] + be[n] @ al[n - 1])
        c2 = max(c2, _mres(lhs, A + seq.gamma_inv[n] @ As @ seq.gamma[n]))
    return [
        CheckResult("freud_a_ladder", "A_n = 4(x^2 + alpha_n x + beta_{n+1} + beta_n + alpha_n^2)*, "
                    "B_n = 2x^3 + 4(beta_n x + beta_n alpha_{n-1} + alpha_n beta_n) - A", ab,
                    FREUD_TOL),
        CheckResult("freud_a_betas", "n I + a_{n,n-1} A - A a_{n,n-1} in terms of alpha, beta", bf1,
                    FREUD_TOL),
        CheckResult("freud_a_compat1", "first compatibility condition for the Freud-A weight", c1,
                    FREUD_TOL),
        CheckResult("freud_a_compat2", "second compatibility condition for the Freud-A weight", c2,
                    FREUD_TOL),
        CheckResult("freud_a_lowering", "lowering operator for the Freud-A weight", low, FREUD_TOL),
        CheckResult("freud_a_raising", "raising operator for the Freud-A weight", rai, FREUD_TOL),
    ]


def _freud_b_forms(seq: MopSequence) -> list[CheckResult]:
    B = seq.spec.params["B"]
    Bs = adjoint(B)
    eye = np.eye(seq.dim)
    x = _x(seq)
    be = seq.beta
    g, gi = seq.gamma, seq.gamma_inv
    lad = _ladders(seq, None, seq.n_max)
    ab = comp = low = rai = 0.0
    for n in range(1, seq.n_max):
        Apoly = 4 * (x * x + _const(adjoint(be[n]) + adjoint(be[n + 1]))) - 2 * _const(Bs + g[n] @ B @ gi[n])
        Bpoly = 2 * (x * x * x + x * (2 * be[n] - B))
        ab = max(ab, _pres(lad[n].A_poly, Apoly), _pres(lad[n].B_poly, Bpoly))
        P = seq.P(n)
        lhs = P.derivative() + 2 * x * (P * B - B * P)
        K = B + gi[n] @ Bs @ g[n]
        rhs = (-4 * x * be[n] * P
               + (4 * (x * x + _const(be[n + 1] + be[n])) - 2 * _const(K)) * be[n] * seq.P(n - 1))
        low = max(low, _pres(lhs, rhs))
        rhs = ((4 * x * x * x + 2 * x * (2 * be[n + 1] - K)) * P
               + (-4 * (x * x + _const(be[n + 1] + be[n])) + 2 * _const(K)) * seq.P(n + 1))
        rai = max(rai, _pres(lhs, rhs))
    for n in range(1, seq.n_max - 1):
        rhs = (4 * ((be[n + 1] + be[n + 2]) @ be[n + 1] - be[n] @ (be[n] + be[n - 1]))
               - 2 * (B @ be[n + 1] - be[n] @ B + gi[n + 1] @ Bs @ g[n] - gi[n] @ Bs @ g[n - 1]))
        comp = max(comp, _mres(eye, rhs))
    return [
        CheckResult("freud_b_ladder", "A_n = 4(x^2 + beta_n* + beta_{n+1}*) - 2(B* + gamma_n B "
                    "gamma_n^{-1}), B_n = 2(x^3 + (2 beta_n - B)x)", ab, FREUD_TOL),
        CheckResult("freud_b_compat", "single compatibility condition for the Freud-B weight", comp,
                    FREUD_TOL),
        CheckResult("freud_b_lowering", "lowering operator for the Freud-B weight", low, FREUD_TOL),
        CheckResult("freud_b_raising", "raising operator for the Freud-B weight", rai, FREUD_TOL),
    ]


def _scalar_hermite_forms(seq: MopSequence) -> list[CheckResult]:
    worst = 0.0
    for n in range(seq.n_max + 1):
        if n < seq.n_max:
            worst = max(worst, abs(seq.alpha[n][0, 0]))
        if n >= 1:
            worst = max(worst, abs(seq.beta[n][0, 0] - n / 2))
        ginv = math.factorial(n) * math.sqrt(math.pi) / 2 ** n
        worst = max(worst, abs(seq.gamma_inv[n][0, 0] - ginv) / max(1.0, ginv))
    return [CheckResult("scalar_hermite_closed_forms", "alpha_n = 0, beta_n = n/2, "
                        "gamma_n^{-1} = n! sqrt(pi) / 2^n", worst, 1e-9)]


_FAMILY_FORMS: dict[str, Callable[[MopSequence], list[CheckResult]]] = {
    "scalar-hermite": _scalar_hermite_forms,
    "hermite-a": _hermite_a_forms,
    "hermite-b": _hermite_b_forms,
    "freud-a": _freud_a_forms,
    "freud-b": _freud_b_forms,
}


def check_closed_forms(ctx: _Ctx) -> list[CheckResult]:
    fn = _FAMILY_FORMS.get(ctx.seq.spec.family)
    if fn is None:
        return [CheckResult("closed_forms", "family-specific closed forms", None, IDENTITY_TOL,
                            skip=f"no closed forms for family {ctx.seq.spec.family}")]
    return fn(ctx.seq)


def check_freud_string(ctx: _Ctx) -> list[CheckResult]:
    seq = ctx.seq
    if seq.spec.family != "freud-b":
        return [CheckResult("freud_string", "matrix discrete Painleve equation", None, FREUD_TOL,
                            skip="needs a Freud-B weight")]
    B = seq.spec.params["B"]
    Bs = adjoint(B)
    eye = np.eye(seq.dim)
    be = seq.beta
    worst = 0.0
    for n in range(1, seq.n_max):
        a2 = seq.coef(n, n - 2)
        lhs = n * eye + 2 * (a2 @ B - B @ a2)
        rhs = (4 * (be[n] @ be[n - 1] + be[n] @ be[n] + be[n + 1] @ be[n])
               - 2 * (B + seq.gamma_inv[n] @ Bs @ seq.gamma[n]) @ be[n])
        worst = max(worst, _mres(lhs, rhs))
    out = [CheckResult("freud_string", "matrix discrete Painleve equation for beta_n", worst,
                       FREUD_TOL)]
    if seq.dim == 1 and np.all(B == 0):
        s = 0.0
        for n in range(1, min(seq.n_max - 1, 3) + 1):
            b = [be[k][0, 0].real for k in (n - 1, n, n + 1)]
            s = max(s, abs(n - 4 * b[1] * (b[2] + b[1] + b[0])))
        out.append(CheckResult("freud_scalar_string", "n = 4 beta_n (beta_{n+1} + beta_n + "
                               "beta_{n-1}) with beta_0 = 0", s, FREUD_TOL))
        b1 = math.gamma(0.75) / math.gamma(0.25)
        out.append(CheckResult("freud_beta1", "beta_1 = Gamma(3/4) / Gamma(1/4)",
                               abs(be[1][0, 0] - b1), 1e-8))
    return out


def check_ad_case(ctx: _Ctx) -> list[CheckResult]:
    seq, case = ctx.seq, ctx.case
    if case is None:
        return [CheckResult("ad_case", "ad-condition ladders", None, IDENTITY_TOL,
                            skip="weight is not an ad-condition Hermite-A case")]
    tol = IDENTITY_TOL if case.variant == "case1" else CASE2_TOL
    name = case.variant
    A, J = case.A, case.J
    As = adjoint(A)
    N = seq.dim
    eye = np.eye(N)
    x = _x(seq)
    H = case.h_poly()
    G = seq.spec.G
    first, second = case.ad_residuals()
    top = min(seq.n_max - 1, 5)
    lh = {n: ladder_coeffs(seq, n, H) for n in range(top + 1)}
    lg = {n: ladder_coeffs(seq, n, G) for n in range(1, top + 1)}
    low = rai = ode1 = 0.0
    for n in range(1, top + 1):
        P = seq.P(n)
        AsH = lh[n].A_poly.adjoint()
        low = max(low, _pres(P * H, -(lh[n].B_poly * P) + AsH * seq.beta[n] * seq.P(n - 1)))
        if n < seq.n_max:
            za = _zmin(seq, seq.alpha[n])
            rai = max(rai, _pres(P * H, (AsH * za - lh[n].B_poly) * P - AsH * seq.P(n + 1)))
        AG = lg[n].A_poly
        if AG.degree <= 0:
            inv = np.linalg.inv(adjoint(AG.coeff(0)))
            lhs = P * H + lh[n].B_poly * P - AsH * inv * (P.derivative() + P * G + lg[n].B_poly * P)
            ode1 = max(ode1, _pres(lhs, MatrixPolynomial.zero(N)) / _scale((P * H).coeffs))
    out = [
        CheckResult(f"{name}_ad_condition", "ad_A(J) and ad_A^2(J) take their required values",
                    max(first, second), 0.0),
        CheckResult(f"{name}_lowering0", "zeroth-order lowering operator with source H", low, tol),
        CheckResult(f"{name}_raising0", "zeroth-order raising operator with source H", rai, tol),
        CheckResult(f"{name}_first_order", "first-order differential relation", ode1, tol),
    ]
    disp = _case1_displays if case.variant == "case1" else _case2_displays
    out += disp(seq, case, lh, top, tol)
    return out


def _case1_displays(seq, case, lh, top, tol):
    A, J = case.A, case.J
    As = adjoint(A)
    eye = np.eye(seq.dim)
    x = _x(seq)
    coeffs = comp = ladd = fo = dg = 0.0
    for n in range(1, top + 1):
        g, gi = seq.gamma[n], seq.gamma_inv[n]
        al, be = seq.alpha[n], seq.beta[n]
        a = seq.coef(n, n - 1)
        Ah = lh[n].A_poly
        coeffs = max(coeffs, _pres(Ah, _const(1j * (-As + g @ A @ gi))),
                     _pres(Ah, _const(2j * (adjoint(al) - As))),
                     _pres(lh[n].B_poly, 1j * (x * A - J + a @ A - A @ a)),
                     _pres(lh[n].B_poly, 1j * (x * A - J + 2 * be - n * eye)))
        comp = max(comp, _mres(J @ al - al @ J + al, A + 0.5 * (A @ A @ al - al @ A @ A)),
                   _mres(J - gi @ J @ g, A @ al + al @ A - 2 * al @ al),
                   _mres((A - 2 * al) @ be, be @ (A - 2 * seq.alpha[n - 1])))
        P = seq.P(n)
        lhs = P * J - J * P - x * (P * A - A * P) + 2 * be * P - n * P
        ladd = max(ladd, _pres(lhs, 2 * (A - al) @ be * seq.P(n - 1)))
        if n < seq.n_max:
            lhs = (P * (J - x * A) - gi * (J - x * As) * g * P + 2 * seq.beta[n + 1] * P
                   - (n + 1) * P)
            ladd = max(ladd, _pres(lhs, 2 * (al - A) * seq.P(n + 1)))
        dP = P.derivative()
        lhs = (A - al) * dP + (A - al + x) * (P * A - A * P) - 2 * be * P
        fo = max(fo, _pres(lhs, P * J - J * P - n * P))
        lhs = dP.derivative() + 2 * dP * (A - x) + P * (A @ A - 2 * J)
        dg = max(dg, _pres(lhs, (-2 * n * eye + A @ A - 2 * J) * P))
    return [
        CheckResult("case1_ladder_coeffs", "A_n(H) = i(-A* + gamma_n A gamma_n^{-1}) = "
                    "2i(alpha_n* - A*), B_n(H) = i(Ax - J + 2 beta_n - nI)", coeffs, tol),
        CheckResult("case1_compat", "compatibility relations for alpha_n with J", comp, tol),
        CheckResult("case1_zeroth_order_displays", "explicit zeroth-order lowering and raising",
                    ladd, tol),
        CheckResult("case1_first_order_display", "explicit first-order relation", fo, tol),
        CheckResult("case1_second_order_display", "P'' + 2P'(A - x) + P(A^2 - 2J) = "
                    "(-2n + A^2 - 2J) P", dg, tol),
    ]


def _case2_displays(seq, case, lh, top, tol):
    A, J = case.A, case.J
    As = adjoint(A)
    eye = np.eye(seq.dim)
    x = _x(seq)
    A2 = A @ A
    D = A - A2
    coeffs = ladd = fo = so = 0.0
    for n in range(1, top + 1):
        g, gi = seq.gamma[n], seq.gamma_inv[n]
        al, be = seq.alpha[n], seq.beta[n]
        als = adjoint(al)
        a = seq.coef(n, n - 1)
        Ah = lh[n].A_poly
        coeffs = max(
            coeffs,
            _pres(Ah, _const(1j * (-As + As @ As + g @ D @ gi))),
            _pres(Ah, _const(2j * (als - As - (als - As) @ als - als @ (als - As)))),
            _pres(lh[n].B_poly, 1j * (x * D - J + a @ D - D @ a)),
            _pres(lh[n].B_poly, 1j * (x * D - J + 2 * be - n * eye - 2 * (A @ be + be @ A)
                                      + 2 * n * A)),
        )
        P = seq.P(n)
        dP = P.derivative()
        K = al - A - (al - A) @ al - al @ (al - A)
        R = -2 * be + n * (eye - 2 * A) + 2 * (A @ be + be @ A)
        lhs = P * (J - x * D) - (J - x * D) * P
        ladd = max(ladd, _pres(lhs, R * P - 2 * K @ be * seq.P(n - 1)))
        if n < seq.n_max:
            ladd = max(ladd, _pres(lhs, R * P - 2 * K * (_zmin(seq, al) * P - seq.P(n + 1))))
        S = (A - al) @ al + al @ (A - al)
        lhs = (A - al - S) * dP
        rhs = (P * J - J * P + x * (P * A2 - A2 * P) - (x + A - al - S) * (P * A - A * P)
               + (2 * be + n * (2 * A - eye) - 2 * (A @ be + be @ A)) * P)
        fo = max(fo, _pres(lhs, rhs))
        T = (al - A) @ al + al @ (al - A)
        lhs = dP.derivative() + 2 * dP * (A - x) + P * (A2 - 2 * x * A2 - 2 * J)
        rhs = ((A2 - 2 * x * A2 - 2 * J) * P
               + (2 * n * (2 * A - eye) - 4 * (A @ be + be @ A) + 2 * T @ A) * P
               - 2 * T * (dP + P * A))
        so = max(so, _pres(lhs, rhs))
    return [
        CheckResult("case2_ladder_coeffs", "explicit A_n(H), B_n(H) for A = L(I + L)^{-1}", coeffs,
                    tol),
        CheckResult("case2_zeroth_order_displays", "explicit zeroth-order lowering and raising",
                    ladd, tol),
        CheckResult("case2_first_order_display", "explicit first-order relation", fo, tol),
        CheckResult("case2_second_order_display", "explicit second-order equation", so, tol),
    ]


# ---------------------------------------------------------------------------
# registry

CHECKS: dict[str, Callable[[_Ctx], list[CheckResult]]] = {
    "recurrence": check_recurrence,
    "orthogonality": check_orthogonality,
    "lof": check_lof,
    "hp": check_hp,
    "cd": check_cd,
    "anbn": check_anbn,
    "b": check_b,
    "second_kind": check_second_kind,
    "rhp": check_rhp,
    "string": check_string,
    "ladders": check_ladders,
    "second_order": check_second_order,
    "lax": check_lax,
    "f_expansion": check_f_expansion,
    "integral_frame": check_integral_frame,
    "scalar_probe": check_scalar_probe,
    "realness": check_realness,
    "closed_forms": check_closed_forms,
    "freud_string": check_freud_string,
    "ad_case": check_ad_case,
}


def run_checks(seq: MopSequence, names=None, seed: int = 0,
               case: AdConditionCase | None = None) -> VerificationReport:
    """Run the named checks (all by default) and collect a report."""
    names = list(CHECKS) if names is None or names == "all" else list(names)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    if case is None:
        case = detect_ad_case(seq)
    ctx = _Ctx(seq, seed, sample_points(seed), case)
    report = VerificationReport(weight_to_json(seq.spec), (1, seq.n_max), seq.tol, seed)
    for name in names:
        report.checks.extend(CHECKS[name](ctx))
    return report
