"""Matrix weights ``W(x) = T(x) T(x)*`` with ``T' = G T`` for a polynomial ``G``.

All built-in families have the form ``T(z) = exp(-q(z)) U(z)`` with a scalar
envelope ``q(z) = z**2 / 2`` (Hermite type) or ``q(z) = z**4 / 2`` (Freud type)
and ``T(0) = I``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy.linalg import expm

from .errors import DimensionMismatchError
from .matpoly import (
    MatrixPolynomial,
    adjoint,
    as_matrix,
    matrix_from_json,
    matrix_to_json,
)

__all__ = [
    "WeightSpec",
    "AdConditionCase",
    "scalar_hermite",
    "hermite_a",
    "hermite_b",
    "freud_a",
    "freud_b",
    "poly_u",
    "custom",
    "weight_eval",
    "t_eval",
    "g_poly",
    "poly_u_validate",
    "commutativity_probe",
    "nilpotent_shift",
    "ladder_diagonal",
    "ad",
    "ad_condition_case",
    "example_spec",
    "weight_from_json",
    "weight_to_json",
    "FAMILIES",
]

FAMILIES = ("scalar-hermite", "hermite-a", "hermite-b", "freud-a", "freud-b", "poly-u", "custom")


def _exp_series(M: np.ndarray) -> np.ndarray | None:
    """Coefficients ``M**k / k!`` for ``k < N`` if ``M`` is nilpotent (exactly), else None."""
    n = M.shape[0]
    terms = [np.eye(n, dtype=complex)]
    power = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        power = power @ M
        if k == n:
            break
        terms.append(power / math.factorial(k))
    if np.any(power != 0):
        return None
    return np.stack(terms)


class _MatrixExp:
    """``s -> exp(s M)`` for scalar or array ``s``; exact finite series when ``M``
    is nilpotent, scaling-and-squaring Pade otherwise."""

    def __init__(self, M: np.ndarray):
        self.M = M
        series = _exp_series(M)
        self.series = None if series is None else MatrixPolynomial(series)

    def __call__(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=complex)
        if self.series is not None:
            return self.series.eval_many(s)
        return expm(s[..., None, None] * self.M)


@dataclass(frozen=True, eq=False)
class WeightSpec:
    """Description of a matrix weight.

    ``envelope`` is the degree of ``q`` (2 or 4), or 0 for ``custom`` weights
    whose ``T`` comes from a sampled table.
    """

    family: str
    dim: int
    G: MatrixPolynomial
    envelope: int
    params: Mapping[str, np.ndarray] = field(default_factory=dict)
    description: str = ""
    _u: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    table: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    # evaluators ------------------------------------------------------------
    def t_many(self, zs) -> np.ndarray:
        zs = np.asarray(zs)
        if self.table is not None:
            if np.iscomplexobj(zs) and np.any(np.imag(zs) != 0):
                raise ValueError("tabulated T has no analytic continuation")
            return _interp_table(self.table, np.real(zs))
        env = np.exp(-(zs.astype(complex) ** self.envelope) / 2)
        return env[..., None, None] * self._u(zs)

    def t(self, z) -> np.ndarray:
        return self.t_many(np.asarray([z]))[0]

    def w_many(self, xs) -> np.ndarray:
        t = self.t_many(np.asarray(xs, dtype=float))
        return t @ adjoint(t)

    def w(self, x: float) -> np.ndarray:
        return self.w_many(np.asarray([x]))[0]

    def w_prime_many(self, xs) -> np.ndarray:
        """``W' = G W + W G*`` on the real line."""
        xs = np.asarray(xs, dtype=float)
        w = self.w_many(xs)
        g = self.G.eval_many(xs)
        return g @ w + w @ adjoint(g)

    @property
    def support(self) -> tuple[float, float] | None:
        """Finite support for tabulated weights, None for weights on the whole line."""
        if self.table is None:
            return None
        grid = self.table[0]
        return float(grid[0]), float(grid[-1])

    @property
    def is_even(self) -> bool:
        return self.family in ("hermite-b", "freud-b") or (
            self.family == "scalar-hermite"
        )

    def validate(self, grid=(-3.0, -1.0, 0.0, 1.0, 3.0), tol: float = 1e-13) -> dict:
        """Probe Hermiticity and positivity of ``W`` on ``grid``."""
        herm = 0.0
        min_eig = np.inf
        for x in grid:
            w = self.w(x)
            herm = max(herm, float(np.max(np.abs(w - adjoint(w)))) / max(1.0, np.max(np.abs(w))))
            min_eig = min(min_eig, float(np.linalg.eigvalsh(0.5 * (w + adjoint(w)))[0]))
        return {"hermitian_residual": herm, "min_eigenvalue": min_eig,
                "ok": herm <= tol and min_eig > 0}

    def ode_residual(self, x: float, h: float) -> float:
        """Central-difference residual ``|(T(x+h)-T(x-h))/2h - G(x)T(x)|``."""
        tp, tm = self.t(x + h), self.t(x - h)
        return float(np.max(np.abs((tp - tm) / (2 * h) - self.G(x) @ self.t(x))))


def _interp_table(table, xs: np.ndarray) -> np.ndarray:
    grid, vals = table
    flat = vals.reshape(len(grid), -1)
    out = np.empty((xs.size, flat.shape[1]), dtype=complex)
    for j in range(flat.shape[1]):
        out[:, j] = np.interp(xs.ravel(), grid, flat[:, j].real, left=0.0, right=0.0) + 1j * np.interp(
            xs.ravel(), grid, flat[:, j].imag, left=0.0, right=0.0
        )
    return out.reshape(xs.shape + vals.shape[1:])


# ---------------------------------------------------------------------------
# built-in families

def _eye(n):
    return np.eye(n, dtype=complex)


def _poly(*coeffs) -> MatrixPolynomial:
    return MatrixPolynomial(np.stack(coeffs))


def scalar_hermite() -> WeightSpec:
    """``w(x) = exp(-x**2)``."""
    one = np.ones((1, 1), dtype=complex)
    return WeightSpec(
        family="scalar-hermite",
        dim=1,
        G=_poly(0 * one, -one),
        envelope=2,
        description="exp(-x^2)",
        _u=lambda z: np.broadcast_to(one, np.shape(z) + (1, 1)).astype(complex),
    )


def hermite_a(A) -> WeightSpec:
    """``W(x) = exp(-x**2) exp(A x) exp(A* x)``, ``G(x) = -x I + A``."""
    A = as_matrix(A)
    n = A.shape[0]
    e = _MatrixExp(A)
    return WeightSpec(
        family="hermite-a",
        dim=n,
        G=_poly(A, -_eye(n)),
        envelope=2,
        params={"A": A},
        description="exp(-x^2) exp(Ax) exp(A*x)",
        _u=e,
    )


def hermite_b(B) -> WeightSpec:
    """``W(x) = exp(-x**2) exp(B x**2) exp(B* x**2)``, ``G(x) = (2B - I) x``."""
    B = as_matrix(B)
    n = B.shape[0]
    e = _MatrixExp(B)
    return WeightSpec(
        family="hermite-b",
        dim=n,
        G=_poly(0 * B, 2 * B - _eye(n)),
        envelope=2,
        params={"B": B},
        description="exp(-x^2) exp(Bx^2) exp(B*x^2)",
        _u=lambda z: e(np.asarray(z, dtype=complex) ** 2),
    )


def freud_a(A) -> WeightSpec:
    """``W(x) = exp(-x**4) exp(A x) exp(A* x)``, ``G(x) = -2x**3 I + A``."""
    A = as_matrix(A)
    n = A.shape[0]
    z0 = 0 * A
    return WeightSpec(
        family="freud-a",
        dim=n,
        G=_poly(A, z0, z0, -2 * _eye(n)),
        envelope=4,
        params={"A": A},
        description="exp(-x^4) exp(Ax) exp(A*x)",
        _u=_MatrixExp(A),
    )


def freud_b(B) -> WeightSpec:
    """``W(x) = exp(-x**4) exp(B x**2) exp(B* x**2)``, ``G(x) = -2x**3 I + 2Bx``."""
    B = as_matrix(B)
    n = B.shape[0]
    z0 = 0 * B
    e = _MatrixExp(B)
    return WeightSpec(
        family="freud-b",
        dim=n,
        G=_poly(z0, 2 * B, z0, -2 * _eye(n)),
        envelope=4,
        params={"B": B},
        description="exp(-x^4) exp(Bx^2) exp(B*x^2)",
        _u=lambda z: e(np.asarray(z, dtype=complex) ** 2),
    )


def poly_u(A1, A2, *, check: bool = True) -> WeightSpec:
    """``W(x) = exp(-x**2) U(x) U(x)*`` with ``U(x) = I + A1 x + A2 x**2``.

    ``U`` has a polynomial inverse ``I - A1 x + (A1**2 - A2) x**2`` exactly when
    ``poly_u_validate(A1, A2)`` holds, and then
    ``G(x) = A1 + (2 A2 - A1**2 - I) x - A2 A1 x**2``.
    """
    A1, A2 = as_matrix(A1), as_matrix(A2, np.shape(A1)[0])
    if check and not poly_u_validate(A1, A2):
        raise ValueError("A1, A2 do not give a polynomial inverse of U")
    n = A1.shape[0]
    U = _poly(_eye(n), A1, A2)
    return WeightSpec(
        family="poly-u",
        dim=n,
        G=_poly(A1, 2 * A2 - A1 @ A1 - _eye(n), -A2 @ A1),
        envelope=2,
        params={"A1": A1, "A2": A2},
        description="exp(-x^2) U(x) U(x)*, U = I + A1 x + A2 x^2",
        _u=U.eval_many,
    )


def custom(G: MatrixPolynomial, grid=None, T_values=None, T=None, envelope: int = 0,
           description: str = "custom") -> WeightSpec:
    """User-supplied weight: either a callable ``T(zs) -> (len(zs), N, N)`` with a
    decaying envelope degree, or a sampled table of ``T`` on ``grid``
    (piecewise-linear, zero outside the grid, real arguments only)."""
    if T is not None:
        if envelope <= 0:
            raise ValueError("callable T needs the degree of its decay envelope")
        return WeightSpec("custom", G.dim, G, envelope, description=description,
                          _u=lambda z: np.exp(np.asarray(z, dtype=complex) ** envelope / 2)[..., None, None] * T(z))
    grid = np.asarray(grid, dtype=float)
    vals = np.asarray(T_values, dtype=complex)
    if vals.shape != (grid.size, G.dim, G.dim):
        raise DimensionMismatchError("T table must have shape (len(grid), N, N)")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    return WeightSpec("custom", G.dim, G, 0, description=description, table=(grid, vals))


def example_spec(family: str, dim: int = 2) -> WeightSpec:
    """A standard member of a built-in family: nilpotent shift parameters for
    ``dim >= 2`` and small scalars for ``dim == 1``."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if family == "scalar-hermite":
        if dim != 1:
            raise DimensionMismatchError("scalar-hermite has dim 1")
        return scalar_hermite()
    shift = nilpotent_shift(np.ones(dim - 1)) if dim > 1 else None
    if family == "hermite-a":
        return hermite_a(shift if dim > 1 else [[0.5]])
    if family == "hermite-b":
        return hermite_b(0.3 * shift if dim > 1 else [[0.2]])
    if family == "freud-a":
        return freud_a(shift if dim > 1 else [[0.5]])
    if family == "freud-b":
        return freud_b(shift if dim > 1 else [[0.0]])
    raise ValueError(f"no example parameters for family {family!r}")


# ---------------------------------------------------------------------------
# functional API

def weight_eval(spec: WeightSpec, x: float) -> np.ndarray:
    return spec.w(x)


def t_eval(spec: WeightSpec, z: complex) -> np.ndarray:
    return spec.t(z)


def g_poly(spec: WeightSpec) -> MatrixPolynomial:
    return spec.G


def poly_u_validate(A1, A2, atol: float = 0.0) -> bool:
    """Both ``A2 A1 + A1 A2 = A1**3`` and ``A2 (A1**2 - A2) = 0`` (and their
    consequences ``A2 A1 A2 = 0``, ``A2 A1**2 = A1**2 A2``); exact by default."""
    A1 = np.asarray(A1, dtype=complex)
    A2 = np.asarray(A2, dtype=complex)
    if A1.shape != A2.shape or A1.ndim != 2 or A1.shape[0] != A1.shape[1]:
        return False
    sq = A1 @ A1
    rels = [
        A2 @ A1 + A1 @ A2 - sq @ A1,
        A2 @ (sq - A2),
        A2 @ A1 @ A2,
        A2 @ sq - sq @ A2,
    ]
    return all(np.max(np.abs(r), initial=0.0) <= atol for r in rels)


def commutativity_probe(spec: WeightSpec, grid, tol: float = 1e-12) -> dict:
    """Largest ``|W(x)W(y) - W(y)W(x)|`` over pairs of grid points."""
    grid = list(grid)
    if not grid:
        raise ValueError("grid must be nonempty")
    ws = spec.w_many(np.asarray(grid, dtype=float))
    worst = 0.0
    for i in range(len(grid)):
        for j in range(i + 1, len(grid)):
            worst = max(worst, float(np.max(np.abs(ws[i] @ ws[j] - ws[j] @ ws[i]))))
    return {"max_residual": worst, "tol": tol, "reduces_to_scalar_candidate": worst <= tol}


# ---------------------------------------------------------------------------
# ad-condition families

def nilpotent_shift(nu) -> np.ndarray:
    """``L = sum_k nu_k E_{k,k+1}``."""
    nu = np.asarray(nu, dtype=complex)
    if np.any(nu == 0):
        raise ValueError("nu_k must be nonzero")
    return np.diag(nu, k=1)


def ladder_diagonal(n: int) -> np.ndarray:
    """``J = diag(N-1, N-2, ..., 0)``."""
    return np.diag(np.arange(n - 1, -1, -1)).astype(complex)


def ad(A: np.ndarray, X: np.ndarray) -> np.ndarray:
    return A @ X - X @ A


@dataclass(frozen=True, eq=False)
class AdConditionCase:
    """``A`` and ``chi = iJ`` for which ``exp(Ax) chi exp(-Ax)`` is linear in ``x``.

    ``case1``: ``A = L``;  ``case2``: ``A = L (I + L)^{-1}``.
    """

    variant: str
    L: np.ndarray
    J: np.ndarray
    A: np.ndarray

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    @property
    def chi(self) -> np.ndarray:
        return 1j * self.J

    def expected_ad(self) -> np.ndarray:
        """Required value of ``ad_A(J)``; ``ad_A(chi)`` is ``1j`` times this."""
        if self.variant == "case1":
            return -self.A
        return -self.A + self.A @ self.A

    def ad_residuals(self) -> tuple[float, float]:
        first = ad(self.A, self.J) - self.expected_ad()
        second = ad(self.A, ad(self.A, self.J))
        return float(np.max(np.abs(first))), float(np.max(np.abs(second)))

    def h_poly(self) -> MatrixPolynomial:
        """``H(x) = exp(Ax) chi exp(-Ax) = i (J + ad_A(J) x)``."""
        return _poly(1j * self.J, 1j * self.expected_ad())

    def weight(self) -> WeightSpec:
        return hermite_a(self.A)


def ad_condition_case(variant: str, nu) -> AdConditionCase:
    L = nilpotent_shift(nu)
    n = L.shape[0]
    if variant == "case1":
        A = L.copy()
    elif variant == "case2":
        A = np.zeros_like(L)
        power = _eye(n)
        for j in range(1, n):
            power = power @ L
            A = A + (-1) ** (j - 1) * power
    else:
        raise ValueError(f"unknown ad-condition variant {variant!r}")
    return AdConditionCase(variant, L, ladder_diagonal(n), A)


# ---------------------------------------------------------------------------
# JSON

def weight_to_json(spec: WeightSpec) -> dict:
    out = {"family": spec.family, "dim": spec.dim}
    for k, v in spec.params.items():
        out[k] = matrix_to_json(v)
    if spec.family == "custom":
        out["G"] = spec.G.to_json()
    return out


def weight_from_json(obj: Mapping) -> WeightSpec:
    family = obj.get("family")
    if family == "scalar-hermite":
        return scalar_hermite()
    if family in ("hermite-a", "freud-a"):
        if "A" not in obj:
            raise ValueError(f"{family} needs a matrix 'A'")
        A = matrix_from_json(obj["A"])
        return hermite_a(A) if family == "hermite-a" else freud_a(A)
    if family in ("hermite-b", "freud-b"):
        if "B" not in obj:
            raise ValueError(f"{family} needs a matrix 'B'")
        B = matrix_from_json(obj["B"])
        return hermite_b(B) if family == "hermite-b" else freud_b(B)
    if family == "poly-u":
        return poly_u(matrix_from_json(obj["A1"]), matrix_from_json(obj["A2"]))
    if family == "custom":
        G = MatrixPolynomial.from_json(obj["G"])
        grid = np.asarray(obj["grid"], dtype=float)
        T = np.stack([matrix_from_json(m) for m in obj["T"]])
        return custom(G, grid=grid, T_values=T)
    raise ValueError(f"unknown weight family {family!r}")
