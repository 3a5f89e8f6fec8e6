"""Monic matrix orthogonal polynomials and everything read off from them.

A :class:`MopSequence` stores, for ``n = 0 .. n_max``, the monic polynomials
``P_n(x) = x**n I + sum_j a[n, j] x**j`` with respect to ``(P, Q) = int P W Q* dx``,
the matrices ``gamma_n`` (inverse of ``(P_n, P_n)``), the recurrence coefficients

    x P_n = P_{n+1} + alpha_n P_n + beta_n P_{n-1},

and the moments ``b[n, k] = int x**k P_n(x) W(x) dx``. Each degree comes from
its own block Hankel solve, so the recurrence is a genuine cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import InsufficientMomentsError
from .matpoly import MatrixPolynomial, adjoint, matrix_to_json, solve_block_system
from .moments import COND_REFUSE, MomentTable, block_hankel, compute_moments, required_order
from .quadrature import integrate
from .weights import WeightSpec, weight_to_json

__all__ = [
    "MopSequence",
    "build_sequence",
    "omega_inverse_b",
    "b_direct",
    "second_kind",
    "second_kind_direct",
    "cauchy_transform",
    "stieltjes",
    "assemble_Y",
    "assemble_Y_inverse",
    "assemble_Y_derivative",
    "assemble_Y_pair",
    "orthonormal",
    "orthonormal_second",
    "An",
    "cd_kernel",
    "orthogonality_residual",
    "hermitian_sqrt",
]

TWO_PI_I = 2j * np.pi
MIN_IMAG = 1e-6


def hermitian_sqrt(m: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Positive semidefinite square root (or its inverse) of a Hermitian matrix."""
    h = 0.5 * (m + adjoint(m))
    vals, vecs = np.linalg.eigh(h)
    vals = np.clip(vals, 0.0, None)
    root = np.sqrt(vals)
    if inverse:
        root = 1.0 / root
    return (vecs * root) @ adjoint(vecs)


@dataclass(frozen=True, eq=False)
class MopSequence:
    spec: WeightSpec
    n_max: int
    tol: float
    moments: MomentTable
    a: tuple  # a[n] has shape (n, N, N): a_{n,0} .. a_{n,n-1}
    gamma: np.ndarray  # (n_max + 1, N, N)
    gamma_inv: np.ndarray
    alpha: np.ndarray  # (n_max, N, N)
    beta: np.ndarray  # (n_max + 1, N, N), beta[0] = 0
    kappa: np.ndarray
    hankel_cond: tuple
    monic: tuple
    second: tuple = field(default=())

    @property
    def dim(self) -> int:
        return self.spec.dim

    def _check_n(self, n: int) -> None:
        if not 0 <= n <= self.n_max:
            raise ValueError(f"degree {n} outside 0..{self.n_max}")

    def coef(self, n: int, j: int) -> np.ndarray:
        """``a_{n,j}`` with ``a_{n,n} = I`` and zero outside ``0 <= j <= n``."""
        self._check_n(n)
        if j == n:
            return np.eye(self.dim, dtype=complex)
        if 0 <= j < n:
            return self.a[n][j]
        return np.zeros((self.dim, self.dim), dtype=complex)

    def b(self, n: int, k: int) -> np.ndarray:
        return b_direct(self, n, k)

    def P(self, n: int) -> MatrixPolynomial:
        self._check_n(n)
        return self.monic[n]

    def Q(self, n: int) -> MatrixPolynomial:
        """Monic-normalised second-kind polynomial."""
        self._check_n(n)
        return self.second[n]

    def max_b_order(self, n: int) -> int:
        return self.moments.max_order - n

    def to_json(self) -> dict:
        """Deterministic export of the whole ledger."""
        b_table = []
        for n in range(self.n_max + 1):
            top = min(2 * self.n_max - 1, self.max_b_order(n))
            b_table.append([matrix_to_json(self.b(n, k)) for k in range(n, top + 1)])
        return {
            "weight": weight_to_json(self.spec),
            "n_max": self.n_max,
            "tol": self.tol,
            "moments": self.moments.to_json(),
            "hankel_cond": list(self.hankel_cond),
            "a": [[matrix_to_json(m) for m in self.a[n]] for n in range(self.n_max + 1)],
            "gamma": [matrix_to_json(m) for m in self.gamma],
            "gamma_inv": [matrix_to_json(m) for m in self.gamma_inv],
            "alpha": [matrix_to_json(m) for m in self.alpha],
            "beta": [matrix_to_json(m) for m in self.beta[1:]],
            "b": b_table,
            "monic": [p.to_json() for p in self.monic],
            "second_kind": [q.to_json() for q in self.second],
        }


def build_sequence(spec: WeightSpec, n_max: int, tol: float = 1e-12,
                   moments: MomentTable | None = None) -> MopSequence:
    """Monic MOPRL ledger up to degree ``n_max`` for ``spec``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    need = required_order(n_max, spec.G.degree)
    if moments is None:
        moments = compute_moments(spec, need, tol)
    elif moments.max_order < 2 * n_max:
        raise InsufficientMomentsError(f"need moments up to {2 * n_max}, have {moments.max_order}")
    N = spec.dim
    eye = np.eye(N, dtype=complex)
    mu = moments.moments

    a_list = [np.zeros((0, N, N), dtype=complex)]
    gamma_inv = [0.5 * (mu[0] + adjoint(mu[0]))]
    conds = [block_hankel(moments, 0).guard()]
    for n in range(1, n_max + 1):
        H = block_hankel(moments, n - 1)
        conds.append(H.guard())
        # X H = -R with X = [a_{n,0} .. a_{n,n-1}]; H is Hermitian so solve H X* = -R*
        R = np.concatenate([mu[n + k] for k in range(n)], axis=1)
        Xs = solve_block_system(H.dense(), -adjoint(R), max_cond=COND_REFUSE)
        X = adjoint(Xs)
        a_n = X.reshape(N, n, N).transpose(1, 0, 2)
        a_list.append(a_n)
        full = np.concatenate([X, eye], axis=1)
        g = full @ block_hankel(moments, n).dense() @ adjoint(full)
        gamma_inv.append(0.5 * (g + adjoint(g)))

    gamma_inv = np.stack(gamma_inv)
    gamma = np.linalg.inv(gamma_inv)
    gamma = 0.5 * (gamma + adjoint(gamma))

    def top(n):  # a_{n,n-1}, with a_{0,-1} = 0
        return a_list[n][n - 1] if n >= 1 else np.zeros((N, N), dtype=complex)

    alpha = np.stack([top(n) - top(n + 1) for n in range(n_max)])
    beta = np.zeros((n_max + 1, N, N), dtype=complex)
    for n in range(1, n_max + 1):
        beta[n] = gamma_inv[n] @ gamma[n - 1]
    kappa = np.stack([hermitian_sqrt(g) for g in gamma])
    monic = tuple(
        MatrixPolynomial(np.concatenate([a_list[n], eye[None]], axis=0)) for n in range(n_max + 1)
    )
    for arr in (gamma, gamma_inv, alpha, beta, kappa):
        arr.setflags(write=False)
    seq = MopSequence(spec, n_max, tol, moments, tuple(a_list), gamma, gamma_inv, alpha, beta,
                      kappa, tuple(conds), monic)
    object.__setattr__(seq, "second", second_kind(seq))
    return seq


def b_direct(seq: MopSequence, n: int, k: int) -> np.ndarray:
    """``b_{n,k} = sum_j a_{n,j} mu_{j+k}``; exactly zero for ``k < n``."""
    seq._check_n(n)
    N = seq.dim
    if k < n:
        return np.zeros((N, N), dtype=complex)
    if n + k > seq.moments.max_order:
        raise InsufficientMomentsError(f"b[{n},{k}] needs moment {n + k}")
    mu = seq.moments.moments
    out = mu[n + k].copy()
    for j in range(n):
        out = out + seq.a[n][j] @ mu[j + k]
    return out


def omega_inverse_b(seq: MopSequence, n: int) -> list[np.ndarray]:
    """``[b_{n-k,n} for k = 0..n]`` from the inverse of the unit block-triangular
    matrix ``Omega`` whose row ``i`` holds the coefficients of ``P_i``.

    ``(Omega^{-1})_{n, n-k} = b*_{n-k,n} gamma_{n-k}``.
    """
    seq._check_n(n)
    N = seq.dim
    size = n + 1
    omega = np.zeros((size * N, size * N), dtype=complex)
    for i in range(size):
        for j in range(i + 1):
            omega[i * N:(i + 1) * N, j * N:(j + 1) * N] = seq.coef(i, j)
    # last block row of Omega^{-1}: solve y Omega = e_n, i.e. Omega* y* = e_n*
    e = np.zeros((N, size * N), dtype=complex)
    e[:, n * N:] = np.eye(N)
    ys = solve_triangular(adjoint(omega), adjoint(e), lower=False, unit_diagonal=True)
    row = adjoint(ys)
    out = []
    for k in range(n + 1):
        blk = row[:, (n - k) * N:(n - k + 1) * N]
        # blk = b*_{n-k,n} gamma_{n-k}
        out.append(adjoint(blk @ seq.gamma_inv[n - k]))
    return out


def second_kind(seq: MopSequence) -> tuple:
    """``Q_0 = 0``, ``Q_1 = mu_0`` and the three-term recurrence for the rest."""
    N = seq.dim
    Q = [MatrixPolynomial.zero(N), MatrixPolynomial.constant(seq.moments[0])]
    for n in range(1, seq.n_max):
        Q.append(Q[n].shift(1) - seq.alpha[n] * Q[n] - seq.beta[n] * Q[n - 1])
    return tuple(Q[: seq.n_max + 1])


def second_kind_direct(seq: MopSequence, n: int, x) -> np.ndarray:
    """``int (P_n(t) - P_n(x)) / (t - x) W(t) dt`` evaluated from moments."""
    P = seq.P(n)
    mu = seq.moments.moments
    out = np.zeros((seq.dim, seq.dim), dtype=complex)
    for k in range(1, n + 1):
        c = P.coeff(k)
        inner = sum(x ** (k - 1 - i) * mu[i] for i in range(k))
        out = out + c @ inner
    return out


# ---------------------------------------------------------------------------
# Cauchy transforms and the Riemann-Hilbert solution

def stieltjes(seq: MopSequence, z: complex, pairs, *, power: int = 1, kind: str = "w",
              tol: float | None = None) -> np.ndarray:
    """``int L(t) V(t) R(t) / (t - z)**power dt`` for each ``(L, R)`` in ``pairs``.

    ``V`` is ``W`` (``kind="w"``) or ``W' = G W + W G*`` (``kind="dw"``); ``L``
    and ``R`` are polynomials or None for the identity. Returns ``(len(pairs), N, N)``.
    """
    z = complex(z)
    if abs(z.imag) <= MIN_IMAG:
        raise ValueError(f"z = {z} is too close to the real axis")
    spec = seq.spec
    tol = seq.tol if tol is None else tol
    R = seq.moments.truncation_radius
    a, b = spec.support if spec.support is not None else (-R, R)
    dist = abs(z.imag)

    def f(t):
        v = spec.w_many(t) if kind == "w" else spec.w_prime_many(t)
        k = (1.0 / (t - z) ** power)[:, None, None]
        outs = []
        for left, right in pairs:
            m = v
            if left is not None:
                m = left.eval_many(t) @ m
            if right is not None:
                m = m @ right.eval_many(t)
            outs.append(m * k)
        return np.stack(outs, axis=1)

    panels = max(16, int(np.ceil((b - a) / min(1.0, dist))))
    res = integrate(f, a, b, tol * min(1.0, dist), panels=panels)
    return res.value


def cauchy_transform(seq: MopSequence, z: complex, left: MatrixPolynomial | None = None,
                     right: MatrixPolynomial | None = None, *, derivative: bool = False,
                     kind: str = "w") -> np.ndarray:
    """``C(L V R)(z) = (1/2 pi i) int L V R / (t - z) dt`` (or its ``z``-derivative)."""
    val = stieltjes(seq, z, [(left, right)], power=2 if derivative else 1, kind=kind)[0]
    return val / TWO_PI_I


def _y_parts(seq: MopSequence, n: int, z: complex, power: int):
    if n < 1:
        raise ValueError("n must be >= 1")
    Pn, Pm = seq.P(n), seq.P(n - 1)
    vals = stieltjes(seq, z, [(Pn, None), (Pm, None), (None, Pm.adjoint()), (None, Pn.adjoint())],
                     power=power)
    return vals / TWO_PI_I


def assemble_Y(seq: MopSequence, n: int, z: complex) -> np.ndarray:
    """The ``2N x 2N`` Riemann-Hilbert solution ``Y^n(z)`` off the real axis."""
    N = seq.dim
    eye = np.eye(N, dtype=complex)
    if n == 0:
        cw = cauchy_transform(seq, z)
        return np.block([[eye, cw], [0 * eye, eye]])
    c = _y_parts(seq, n, z, 1)
    g = seq.gamma[n - 1]
    return np.block([
        [seq.P(n)(z), c[0]],
        [-TWO_PI_I * g @ seq.P(n - 1)(z), -TWO_PI_I * g @ c[1]],
    ])


def assemble_Y_inverse(seq: MopSequence, n: int, z: complex) -> np.ndarray:
    """Closed form of ``(Y^n(z))^{-1}`` in terms of adjoint-reflected data."""
    N = seq.dim
    eye = np.eye(N, dtype=complex)
    if n == 0:
        cw = cauchy_transform(seq, z)
        return np.block([[eye, -cw], [0 * eye, eye]])
    c = _y_parts(seq, n, z, 1)
    g = seq.gamma[n - 1]
    return np.block([
        [-TWO_PI_I * c[2] @ g, -c[3]],
        [TWO_PI_I * seq.P(n - 1).adjoint()(z) @ g, seq.P(n).adjoint()(z)],
    ])


def assemble_Y_pair(seq: MopSequence, n: int, z: complex) -> tuple[np.ndarray, np.ndarray]:
    """``(Y^n(z), (Y^n(z))^{-1})`` sharing one quadrature."""
    if n == 0:
        return assemble_Y(seq, 0, z), assemble_Y_inverse(seq, 0, z)
    c = _y_parts(seq, n, z, 1)
    g = seq.gamma[n - 1]
    Y = np.block([
        [seq.P(n)(z), c[0]],
        [-TWO_PI_I * g @ seq.P(n - 1)(z), -TWO_PI_I * g @ c[1]],
    ])
    Yi = np.block([
        [-TWO_PI_I * c[2] @ g, -c[3]],
        [TWO_PI_I * seq.P(n - 1).adjoint()(z) @ g, seq.P(n).adjoint()(z)],
    ])
    return Y, Yi


def assemble_Y_derivative(seq: MopSequence, n: int, z: complex) -> np.ndarray:
    """``d Y^n / dz`` with the Cauchy columns differentiated under the integral."""
    if n < 1:
        raise ValueError("n must be >= 1")
    c = _y_parts(seq, n, z, 2)
    g = seq.gamma[n - 1]
    return np.block([
        [seq.P(n).derivative()(z), c[0]],
        [-TWO_PI_I * g @ seq.P(n - 1).derivative()(z), -TWO_PI_I * g @ c[1]],
    ])


# ---------------------------------------------------------------------------
# orthonormal polynomials and the CD kernel

def orthonormal(seq: MopSequence, n: int) -> MatrixPolynomial:
    """``P_n = kappa_n * monic_n`` with ``kappa_n`` the PSD root of ``gamma_n``."""
    return seq.kappa[n] * seq.P(n)


def orthonormal_second(seq: MopSequence, n: int) -> MatrixPolynomial:
    return seq.kappa[n] * seq.Q(n)


def An(seq: MopSequence, n: int) -> np.ndarray:
    """``A_n = kappa_{n-1} kappa_n^{-1}``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return seq.kappa[n - 1] @ hermitian_sqrt(seq.gamma[n], inverse=True)


def cd_kernel(seq: MopSequence, n: int, x, y, path: str = "sum") -> np.ndarray:
    """``K_n(x, y) = sum_{j<n} P_j*(y) P_j(x)``, by direct sum or the CD formula."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if path == "sum":
        out = 0
        for j in range(n):
            p = orthonormal(seq, j)
            out = out + p.adjoint()(y) @ p(x)
        return np.asarray(out)
    if path != "cd":
        raise ValueError(f"unknown path {path!r}")
    if abs(x - y) <= 1e-8:
        raise ValueError("CD formula needs x != y")
    pn, pm = orthonormal(seq, n), orthonormal(seq, n - 1)
    A = An(seq, n)
    num = pm.adjoint()(y) @ A @ pn(x) - pn.adjoint()(y) @ adjoint(A) @ pm(x)
    return num / (x - y)


def orthogonality_residual(seq: MopSequence) -> float:
    """``max |int x**j P_n W dx|`` over ``j < n <= n_max``, relative to the moment scale."""
    worst = 0.0
    for n in range(1, seq.n_max + 1):
        mu = seq.moments.moments
        for j in range(n):
            r = mu[n + j].copy()
            for i in range(n):
                r = r + seq.a[n][i] @ mu[i + j]
            scale = max(1.0, float(np.max(np.abs(mu[n + j]))))
            worst = max(worst, float(np.max(np.abs(r))) / scale)
    return worst
