"""Ladder coefficients of monic MOPRL for weights with ``T' = G T``.

For a polynomial source ``G(z) = sum_j M_j z**j`` of degree ``m`` the matrix
``X^n = Y^n diag(T, T^{-*})`` obeys ``X' = F_n X`` with

    F_n = [[-B_n, -(1/2 pi i) gamma_n^{-1} A_n],
           [2 pi i A_{n-1} gamma_{n-1}, B_n*]],

where ``A_n`` (degree ``<= m-1``) and ``B_n`` (degree ``<= m``) are built from the
ledger alone. Everything here is linear in the source polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatchError
from .matpoly import MatrixPolynomial, adjoint, block_matrix
from .mop import TWO_PI_I, MopSequence, assemble_Y, assemble_Y_inverse, stieltjes
from .weights import AdConditionCase

__all__ = [
    "LadderCoeffs",
    "truncated_monic",
    "delta",
    "ladder_coeffs",
    "f_matrix",
    "f_matrix_via_expansion",
    "y_expansion",
    "y_inverse_expansion",
    "h_poly",
    "ladder_coeffs_H",
    "ode_coeffs",
    "integral_coeffs",
    "integral_f_matrix",
    "e_matrix",
    "frame_change",
    "SINGULAR_TOL",
]

SINGULAR_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class LadderCoeffs:
    n: int
    source: MatrixPolynomial
    A_poly: MatrixPolynomial
    B_poly: MatrixPolynomial | None  # undefined for n = 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "source": self.source.to_json(),
            "A": self.A_poly.to_json(),
            "B": None if self.B_poly is None else self.B_poly.to_json(),
        }


def _source(seq: MopSequence, source) -> MatrixPolynomial:
    src = seq.spec.G if source is None else source
    if src.dim != seq.dim:
        raise DimensionMismatchError("source polynomial dimension differs from the weight")
    return src


def truncated_monic(seq: MopSequence, n: int, k: int) -> MatrixPolynomial:
    """``z**k I + a_{n,n-1} z**(k-1) + ... + a_{n,n-k}``, for ``0 <= k <= n``."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    return _section(seq, n, k)


def _section(seq: MopSequence, n: int, k: int) -> MatrixPolynomial:
    # zero-extended: coefficients a_{n,j} with j < 0 vanish
    coeffs = np.stack([seq.coef(n, n - k + i) for i in range(k + 1)])
    return MatrixPolynomial(coeffs)


def delta(seq: MopSequence, n: int, j: int, source=None) -> MatrixPolynomial:
    """``Delta_{j,n} = sum_{k=0}^{j} Phat_{n,k} M_{m-j+k}`` for the source ``G``."""
    G = _source(seq, source)
    m = G.degree
    if m < 0:
        return MatrixPolynomial.zero(seq.dim)
    if j > m:
        raise ValueError(f"j = {j} exceeds the source degree {m}")
    out = MatrixPolynomial.zero(seq.dim)
    for k in range(j + 1):
        out = out + _section(seq, n, k) * G.coeff(m - j + k)
    return out


def ladder_coeffs(seq: MopSequence, n: int, source=None) -> LadderCoeffs:
    """Polynomial ladder coefficients ``A_n(z; G)`` and ``B_n(z; G)``."""
    G = _source(seq, source)
    m = G.degree
    N = seq.dim
    zero = MatrixPolynomial.zero(N)
    if m < 0:
        return LadderCoeffs(n, G, zero, zero if n >= 1 else None)
    deltas = [delta(seq, n, j, G) for j in range(m + 1)]

    A = zero
    for j in range(m):
        b = seq.b(n, n + m - j - 1)
        A = A + b * deltas[j].adjoint() + deltas[j] * adjoint(b)
    A = -seq.gamma[n] * A

    B = None
    if n >= 1:
        prev = [delta(seq, n - 1, j, G) for j in range(m + 1)]
        B = zero
        for j in range(m + 1):
            B = B + deltas[j] * adjoint(seq.b(n - 1, n + m - j - 1))
            B = B + seq.b(n, n + m - j - 2) * prev[j].adjoint()
        B = -(B * seq.gamma[n - 1])
    return LadderCoeffs(n, G, A, B)


def f_matrix(seq: MopSequence, n: int, z, source=None) -> np.ndarray:
    """``F_n(z; G)`` assembled from ``A_n``, ``A_{n-1}`` and ``B_n``."""
    if n < 1:
        raise ValueError("F_n needs A_{n-1}, so n >= 1")
    c = ladder_coeffs(seq, n, source)
    cm = ladder_coeffs(seq, n - 1, source)
    return block_matrix([
        [-c.B_poly(z), -(seq.gamma_inv[n] @ c.A_poly(z)) / TWO_PI_I],
        [TWO_PI_I * cm.A_poly(z) @ seq.gamma[n - 1], c.B_poly.adjoint()(z)],
    ])


def y_expansion(seq: MopSequence, n: int, i: int) -> np.ndarray:
    """Coefficient of ``z**-i`` in ``Y^n(z) diag(z**-n, z**n)`` at infinity."""
    g = seq.gamma[n - 1]
    return block_matrix([
        [seq.coef(n, n - i), -seq.b(n, n + i - 1) / TWO_PI_I],
        [-TWO_PI_I * g @ seq.coef(n - 1, n - i), g @ seq.b(n - 1, n + i - 1)],
    ])


def y_inverse_expansion(seq: MopSequence, n: int, i: int) -> np.ndarray:
    """Coefficient of ``z**-i`` in ``diag(z**n, z**-n) (Y^n(z))^{-1}`` at infinity."""
    g = seq.gamma[n - 1]
    return block_matrix([
        [adjoint(seq.b(n - 1, n + i - 1)) @ g, adjoint(seq.b(n, n + i - 1)) / TWO_PI_I],
        [TWO_PI_I * adjoint(seq.coef(n - 1, n - i)) @ g, adjoint(seq.coef(n, n - i))],
    ])


def f_matrix_via_expansion(seq: MopSequence, n: int, z, source=None) -> np.ndarray:
    """``F_n(z; G)`` as the polynomial part of ``Y diag(G, -G*) Y^{-1}`` at infinity."""
    if n < 1:
        raise ValueError("n must be >= 1")
    G = _source(seq, source)
    m = max(G.degree, 0)
    Ys = [y_expansion(seq, n, i) for i in range(m + 1)]
    Yt = [y_inverse_expansion(seq, n, i) for i in range(m + 1)]
    Mt = [block_matrix([[G.coeff(j), 0 * G.coeff(j)], [0 * G.coeff(j), -adjoint(G.coeff(j))]])
          for j in range(m + 1)]
    out = np.zeros_like(Mt[0])
    for k in range(m + 1):
        ck = np.zeros_like(out)
        for j in range(k, m + 1):
            for i in range(j - k + 1):
                ck = ck + Ys[i] @ Mt[j] @ Yt[j - i - k]
        out = out + ck * z ** k
    return out


def e_matrix(seq: MopSequence, n: int, z) -> np.ndarray:
    """Transfer matrix with ``Y^{n+1} = E_n Y^n``."""
    N = seq.dim
    return block_matrix([
        [z * np.eye(N) - seq.alpha[n], seq.gamma_inv[n] / TWO_PI_I],
        [-TWO_PI_I * seq.gamma[n], np.zeros((N, N))],
    ])


# ---------------------------------------------------------------------------
# non-unique factorisation

def h_poly(case: AdConditionCase) -> MatrixPolynomial:
    """``H(x) = exp(Ax) chi exp(-Ax)``, linear in ``x`` under the ad-conditions."""
    first, second = case.ad_residuals()
    if first != 0 or second != 0:
        raise ValueError("ad-conditions do not hold for this case")
    return case.h_poly()


def ladder_coeffs_H(seq: MopSequence, n: int, case: AdConditionCase) -> LadderCoeffs:
    return ladder_coeffs(seq, n, h_poly(case))


# ---------------------------------------------------------------------------
# second-order equation

def _inv_checked(m: np.ndarray, z) -> np.ndarray:
    s = np.linalg.svd(m, compute_uv=False)
    if s[-1] <= SINGULAR_TOL * max(1.0, s[0]):
        raise np.linalg.LinAlgError(f"A_n*(z) is singular at z = {z}")
    return np.linalg.inv(m)


def ode_coeffs(seq: MopSequence, n: int, source=None) -> tuple[Callable, Callable]:
    """Evaluators ``z -> M_n(z)`` and ``z -> N_n(z)`` of the second-order equation

        P'' + 2 P' G + P (G' + G**2) + M_n P' + N_n P + M_n P G = 0.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    c = ladder_coeffs(seq, n, source)
    cp = ladder_coeffs(seq, n + 1, source)
    cm = ladder_coeffs(seq, n - 1, source)
    As = c.A_poly.adjoint()
    dAs = As.derivative()
    Bn, Bp = c.B_poly, cp.B_poly
    dB = Bn.derivative()
    Ams = cm.A_poly.adjoint()
    alpha, beta = seq.alpha[n], seq.beta[n]
    eye = np.eye(seq.dim)

    def M(z):
        a = As(z)
        ai = _inv_checked(a, z)
        return -dAs(z) @ ai + Bn(z) - a @ (z * eye - alpha) + a @ Bp(z) @ ai

    def Nfun(z):
        b = Bn(z)
        return M(z) @ b - b @ b + dB(z) + As(z) @ beta @ Ams(z)

    return M, Nfun


# ---------------------------------------------------------------------------
# integral form of the ladder coefficients (weights on the whole line)

def integral_coeffs(seq: MopSequence, n: int, z) -> tuple[np.ndarray, np.ndarray | None]:
    """``A_n(z)``, ``B_n(z)`` from Cauchy-type integrals of ``W' = G W + W G*``.

    No boundary terms appear since ``W`` decays at both ends of the real line.
    """
    Pn = seq.P(n)
    pairs = [(Pn, Pn.adjoint())]
    if n >= 1:
        pairs.append((Pn, seq.P(n - 1).adjoint()))
    vals = stieltjes(seq, z, pairs, kind="dw")
    A = -seq.gamma[n] @ vals[0]
    B = -vals[1] @ seq.gamma[n - 1] if n >= 1 else None
    return A, B


def integral_f_matrix(seq: MopSequence, n: int, z) -> np.ndarray:
    """The coefficient matrix of ``dY^n/dz = F Y^n`` built from integral coefficients."""
    if n < 1:
        raise ValueError("n must be >= 1")
    A, B = integral_coeffs(seq, n, z)
    Am, _ = integral_coeffs(seq, n - 1, z)
    _, Bc = integral_coeffs(seq, n, np.conj(z))
    return block_matrix([
        [-B, -(seq.gamma_inv[n] @ A) / TWO_PI_I],
        [TWO_PI_I * Am @ seq.gamma[n - 1], adjoint(Bc)],
    ])


def frame_change(seq: MopSequence, n: int, z, source=None) -> np.ndarray:
    """``Y^n diag(G, -G*) (Y^n)^{-1}`` at ``z``; ``F_n`` minus this is ``dY/dz Y^{-1}``."""
    G = _source(seq, source)
    g = G(z)
    Mt = block_matrix([[g, 0 * g], [0 * g, -G.adjoint()(z)]])
    return assemble_Y(seq, n, z) @ Mt @ assemble_Y_inverse(seq, n, z)
