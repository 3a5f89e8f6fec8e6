"""Dense complex matrices and polynomials with matrix coefficients.

Matrices are plain ``numpy`` arrays of shape ``(N, N)`` and complex dtype.
A :class:`MatrixPolynomial` stores its coefficients in ascending powers as a
read-only array of shape ``(d + 1, N, N)``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError, IllConditionedError

__all__ = [
    "MatrixPolynomial",
    "as_matrix",
    "adjoint",
    "is_hermitian",
    "is_positive_definite",
    "is_unitary",
    "matrix_to_json",
    "matrix_from_json",
    "solve_block_system",
    "block_matrix",
    "compensated_sum",
]

PREDICATE_TOL = 1e-12
RESIDUAL_CONSTANT = 64.0


def as_matrix(a, dim: int | None = None) -> np.ndarray:
    """Coerce ``a`` to a square complex matrix (scalars become ``a * I``)."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 0:
        if dim is None:
            dim = 1
        m = m * np.eye(dim, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {m.shape[0]}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def _scale(m: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0


def is_hermitian(m, tol: float = PREDICATE_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - adjoint(m)), initial=0.0) <= tol * _scale(m))


def is_positive_definite(m, tol: float = PREDICATE_TOL) -> bool:
    m = np.asarray(m)
    if not is_hermitian(m, tol):
        return False
    eig = np.linalg.eigvalsh(0.5 * (m + adjoint(m)))
    return bool(eig[0] > tol * _scale(m))


def is_unitary(m, tol: float = PREDICATE_TOL) -> bool:
    m = np.asarray(m)
    eye = np.eye(m.shape[0])
    return bool(np.max(np.abs(adjoint(m) @ m - eye)) <= tol * _scale(m))


def compensated_sum(terms: Iterable[np.ndarray]) -> np.ndarray:
    """Neumaier-compensated sum of equally shaped arrays, in the given order."""
    total = None
    comp = None
    for t in terms:
        t = np.asarray(t)
        if total is None:
            total = t.copy()
            comp = np.zeros_like(total)
            continue
        s = total + t
        big = np.abs(total.real) >= np.abs(t.real)
        comp_re = np.where(big, (total.real - s.real) + t.real, (t.real - s.real) + total.real)
        if np.iscomplexobj(s):
            bigi = np.abs(total.imag) >= np.abs(t.imag)
            comp_im = np.where(bigi, (total.imag - s.imag) + t.imag, (t.imag - s.imag) + total.imag)
            comp = comp + comp_re + 1j * comp_im
        else:
            comp = comp + comp_re
        total = s
    if total is None:
        raise ValueError("empty sum")
    return total + comp


# ---------------------------------------------------------------------------
# JSON encoding

def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "dim": int(m.shape[0]),
        "entries": [[[float(v.real), float(v.imag)] for v in row] for row in m],
    }


def matrix_from_json(obj) -> np.ndarray:
    """Accepts the ``{"dim", "entries"}`` form, or a bare nested list of
    numbers / ``[re, im]`` pairs."""
    entries = obj["entries"] if isinstance(obj, dict) else obj
    rows = []
    for row in entries:
        vals = []
        for v in row:
            if isinstance(v, (list, tuple)):
                re, im = v
                vals.append(complex(re, im))
            else:
                vals.append(complex(v))
        rows.append(vals)
    m = as_matrix(np.array(rows, dtype=complex))
    if isinstance(obj, dict) and "dim" in obj and obj["dim"] != m.shape[0]:
        raise DimensionMismatchError("'dim' does not match entries")
    return m


# ---------------------------------------------------------------------------
# Matrix polynomials

class MatrixPolynomial:
    """Polynomial ``sum_k C_k z**k`` with ``N x N`` complex coefficients.

    Trailing coefficients that are exactly zero are trimmed, so ``degree`` is
    structural; the zero polynomial has degree ``-1`` and a single zero
    coefficient.
    """

    __slots__ = ("_coeffs",)
    # make ``ndarray * poly`` dispatch to __rmul__ instead of broadcasting
    __array_ufunc__ = None

    def __init__(self, coeffs, dim: int | None = None):
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 2:
            c = c[None]
        if c.ndim != 3 or c.shape[1] != c.shape[2]:
            raise DimensionMismatchError(f"bad coefficient array shape {c.shape}")
        if dim is not None and c.shape[1] != dim:
            raise DimensionMismatchError(f"expected dimension {dim}, got {c.shape[1]}")
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial has non-finite coefficients")
        nz = np.flatnonzero(np.any(c != 0, axis=(1, 2)))
        top = nz[-1] + 1 if nz.size else 1
        c = c[:top].copy()
        c.setflags(write=False)
        self._coeffs = c

    # construction helpers
    @classmethod
    def constant(cls, m) -> "MatrixPolynomial":
        return cls(as_matrix(m)[None])

    @classmethod
    def identity(cls, dim: int) -> "MatrixPolynomial":
        return cls(np.eye(dim, dtype=complex)[None])

    @classmethod
    def zero(cls, dim: int) -> "MatrixPolynomial":
        return cls(np.zeros((1, dim, dim), dtype=complex))

    @classmethod
    def monomial(cls, k: int, m) -> "MatrixPolynomial":
        """``m * z**k``."""
        m = as_matrix(m)
        c = np.zeros((k + 1,) + m.shape, dtype=complex)
        c[k] = m
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def dim(self) -> int:
        return self._coeffs.shape[1]

    @property
    def degree(self) -> int:
        if self._coeffs.shape[0] == 1 and not np.any(self._coeffs[0]):
            return -1
        return self._coeffs.shape[0] - 1

    def coeff(self, k: int) -> np.ndarray:
        """Coefficient of ``z**k`` (zero outside the stored range)."""
        if 0 <= k < self._coeffs.shape[0]:
            return self._coeffs[k]
        return np.zeros((self.dim, self.dim), dtype=complex)

    def padded(self, length: int) -> np.ndarray:
        """Coefficient array zero-padded (or not truncated) to ``length`` rows."""
        n = max(length, self._coeffs.shape[0])
        out = np.zeros((n, self.dim, self.dim), dtype=complex)
        out[: self._coeffs.shape[0]] = self._coeffs
        return out

    # evaluation
    def __call__(self, z) -> np.ndarray:
        return self.eval(z)

    def eval(self, z) -> np.ndarray:
        """Horner evaluation at a scalar ``z``."""
        c = self._coeffs
        out = c[-1].copy()
        for k in range(c.shape[0] - 2, -1, -1):
            out = out * z + c[k]
        return out

    def eval_many(self, zs) -> np.ndarray:
        """Horner evaluation at an array of points; returns ``(len(zs), N, N)``."""
        zs = np.asarray(zs)
        c = self._coeffs
        out = np.broadcast_to(c[-1], zs.shape + c.shape[1:]).astype(complex)
        for k in range(c.shape[0] - 2, -1, -1):
            out = out * zs[..., None, None] + c[k]
        return out

    # algebra
    def _check(self, other: "MatrixPolynomial") -> None:
        if other.dim != self.dim:
            raise DimensionMismatchError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other) -> "MatrixPolynomial":
        other = _coerce(other, self.dim)
        self._check(other)
        n = max(len(self._coeffs), len(other._coeffs))
        return MatrixPolynomial(self.padded(n) + other.padded(n))

    __radd__ = __add__

    def __neg__(self) -> "MatrixPolynomial":
        return MatrixPolynomial(-self._coeffs)

    def __sub__(self, other) -> "MatrixPolynomial":
        return self + (-_coerce(other, self.dim))

    def __rsub__(self, other) -> "MatrixPolynomial":
        return _coerce(other, self.dim) - self

    def __mul__(self, other) -> "MatrixPolynomial":
        if np.isscalar(other):
            return MatrixPolynomial(self._coeffs * other)
        other = _coerce(other, self.dim)
        self._check(other)
        p, q = self._coeffs, other._coeffs
        out = np.zeros((len(p) + len(q) - 1, self.dim, self.dim), dtype=complex)
        for i in range(len(p)):
            out[i : i + len(q)] += p[i] @ q
        return MatrixPolynomial(out)

    def __rmul__(self, other) -> "MatrixPolynomial":
        if np.isscalar(other):
            return MatrixPolynomial(self._coeffs * other)
        return _coerce(other, self.dim) * self

    def __matmul__(self, other):
        return self * other

    def __rmatmul__(self, other):
        return self.__rmul__(other)

    def shift(self, k: int = 1) -> "MatrixPolynomial":
        """Multiply by ``z**k``."""
        pad = np.zeros((k, self.dim, self.dim), dtype=complex)
        return MatrixPolynomial(np.concatenate([pad, self._coeffs]))

    def derivative(self) -> "MatrixPolynomial":
        c = self._coeffs
        if c.shape[0] == 1:
            return MatrixPolynomial.zero(self.dim)
        k = np.arange(1, c.shape[0])[:, None, None]
        return MatrixPolynomial(c[1:] * k)

    def adjoint(self) -> "MatrixPolynomial":
        """``P*(z) := (P(conj z))*``, i.e. coefficient-wise conjugate transpose."""
        return MatrixPolynomial(adjoint(self._coeffs))

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self._coeffs)))

    def allclose(self, other, atol: float = 0.0) -> bool:
        return (self - other).max_abs_coeff() <= atol

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        return self._coeffs.shape == other._coeffs.shape and bool(
            np.all(self._coeffs == other._coeffs)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"MatrixPolynomial(dim={self.dim}, degree={self.degree})"

    # serialization
    def to_json(self) -> dict:
        return {"dim": self.dim, "coeffs": [matrix_to_json(c) for c in self._coeffs]}

    @classmethod
    def from_json(cls, obj) -> "MatrixPolynomial":
        coeffs = [matrix_from_json(c) for c in obj["coeffs"]]
        if not coeffs:
            raise ValueError("polynomial needs at least one coefficient")
        return cls(np.stack(coeffs), dim=obj.get("dim"))


def _coerce(other, dim: int) -> MatrixPolynomial:
    if isinstance(other, MatrixPolynomial):
        return other
    return MatrixPolynomial.constant(as_matrix(other, dim))


# ---------------------------------------------------------------------------
# Block linear systems

def block_matrix(blocks: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
    return np.block([[np.asarray(b, dtype=complex) for b in row] for row in blocks])


def solve_block_system(M, rhs, *, max_cond: float = 1e13) -> np.ndarray:
    """Solve ``M x = rhs`` where ``M`` is square (given dense or as a grid of
    blocks) and return ``x`` with the shape of ``rhs``.

    Raises :class:`IllConditionedError` when the 2-norm condition number
    exceeds ``max_cond``. The residual satisfies
    ``|M x - rhs| <= RESIDUAL_CONSTANT * cond(M) * eps * |rhs|``.
    """
    M = block_matrix(M) if isinstance(M, (list, tuple)) else np.asarray(M, dtype=complex)
    b = np.asarray(rhs, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatchError(f"system matrix must be square, got {M.shape}")
    if b.shape[0] != M.shape[0]:
        raise DimensionMismatchError(f"rhs has {b.shape[0]} rows, system has {M.shape[0]}")
    sv = np.linalg.svd(M, compute_uv=False)
    cond = np.inf if sv[-1] == 0 else float(sv[0] / sv[-1])
    if not cond <= max_cond:
        raise IllConditionedError(cond)
    return np.linalg.solve(M, b)
