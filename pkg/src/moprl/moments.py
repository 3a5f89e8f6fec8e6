"""Moment tables ``mu_k = int x**k W(x) dx`` and block Hankel matrices."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedError, InsufficientMomentsError, NonConvergentError
from .matpoly import matrix_from_json, matrix_to_json
from .quadrature import GL_ORDER, integrate
from .weights import WeightSpec

__all__ = [
    "MomentTable",
    "BlockHankel",
    "compute_moments",
    "block_hankel",
    "truncation_radius",
    "required_order",
    "COND_WARN",
    "COND_REFUSE",
]

COND_WARN = 1e10
COND_REFUSE = 1e13


@dataclass(frozen=True, eq=False)
class MomentTable:
    dim: int
    max_order: int
    moments: np.ndarray  # (max_order + 1, N, N)
    truncation_radius: float
    tol: float
    node_count: int
    panels: int

    def __getitem__(self, k: int) -> np.ndarray:
        if not 0 <= k <= self.max_order:
            raise InsufficientMomentsError(f"moment {k} not available (max_order={self.max_order})")
        return self.moments[k]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "max_order": self.max_order,
            "truncation_radius": self.truncation_radius,
            "tol": self.tol,
            "node_count": self.node_count,
            "panels": self.panels,
            "quadrature": f"composite Gauss-Legendre, {GL_ORDER} nodes per panel",
            "moments": [matrix_to_json(m) for m in self.moments],
        }

    @classmethod
    def from_json(cls, obj) -> "MomentTable":
        mom = np.stack([matrix_from_json(m) for m in obj["moments"]])
        mom.setflags(write=False)
        return cls(obj["dim"], obj["max_order"], mom, obj["truncation_radius"], obj["tol"],
                   obj["node_count"], obj.get("panels", 0))


def required_order(n_max: int, g_degree: int) -> int:
    """Moment order needed to build ladder coefficients up to degree ``n_max``."""
    return 2 * n_max + max(g_degree, 0) + 2


def truncation_radius(spec: WeightSpec, max_order: int, tol: float) -> float:
    """Radius outside which ``|x|**max_order |W(x)|`` is negligible, doubled once."""
    if spec.support is not None:
        a, b = spec.support
        return max(abs(a), abs(b))
    # widen the scan until the integrand is negligible at its ends; starting small
    # keeps non-nilpotent matrix exponentials away from overflow
    reaches = (8.0, 16.0, 32.0, 64.0) if spec.envelope == 2 else (4.0, 8.0, 16.0)
    for reach in reaches:
        xs = np.linspace(-reach, reach, 2049)
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            w = spec.w_many(xs)
            g = np.abs(xs) ** max_order * np.max(np.abs(w), axis=(1, 2))
        if not np.isfinite(g).all():
            break
        cut = tol * 1e-6 * g.max()
        if g[0] < cut and g[-1] < cut:
            big = np.flatnonzero(g > cut)
            step = xs[1] - xs[0]
            r = max(abs(xs[big[0]]), abs(xs[big[-1]])) + step
            return float(2 * max(r, 1.0))
    raise NonConvergentError("weight does not decay fast enough for the requested moments")


def compute_moments(spec: WeightSpec, max_order: int, tol: float = 1e-12) -> MomentTable:
    """Moments ``mu_0 .. mu_max_order`` from one composite Gauss-Legendre rule.

    Every moment comes from the same nodes and weights, so the table is the
    exact moment sequence of a discrete positive matrix measure.
    """
    if max_order < 0:
        raise ValueError("max_order must be >= 0")
    if not tol > 0:
        raise ValueError("tol must be positive")
    R = truncation_radius(spec, max_order, tol)
    if spec.support is not None:
        a, b = spec.support
    else:
        a, b = -R, R
    powers = np.arange(max_order + 1)

    def f(x):
        w = spec.w_many(x)
        xp = x[:, None] ** powers[None, :]
        return xp[:, :, None, None] * w[:, None, :, :]

    res = integrate(f, a, b, tol, panels=max(8, int(np.ceil(b - a))))
    mom = res.value.copy()
    # W is Hermitian on the real line; remove rounding asymmetry
    mom = 0.5 * (mom + np.conj(np.swapaxes(mom, -1, -2)))
    mom.setflags(write=False)
    return MomentTable(spec.dim, max_order, mom, float(R), tol, res.node_count, res.panels)


@dataclass(frozen=True, eq=False)
class BlockHankel:
    n: int
    blocks: np.ndarray  # (n+1, n+1, N, N), blocks[i, j] = mu_{i+j}

    def dense(self) -> np.ndarray:
        n1, _, N, _ = self.blocks.shape
        return self.blocks.transpose(0, 2, 1, 3).reshape(n1 * N, n1 * N)

    def cond(self) -> float:
        sv = np.linalg.svd(self.dense(), compute_uv=False)
        return float(sv[0] / sv[-1]) if sv[-1] > 0 else np.inf

    def guard(self) -> float:
        """Condition estimate; warns above ``COND_WARN`` and raises above ``COND_REFUSE``."""
        c = self.cond()
        if not c <= COND_REFUSE:
            raise IllConditionedError(c, f"block Hankel matrix of order {self.n}")
        if c > COND_WARN:
            warnings.warn(f"block Hankel matrix of order {self.n} has cond {c:.2e}", stacklevel=2)
        return c


def block_hankel(table: MomentTable, n: int) -> BlockHankel:
    if n < 0:
        raise ValueError("n must be >= 0")
    if table.max_order < 2 * n:
        raise InsufficientMomentsError(f"block Hankel of order {n} needs moments up to {2 * n}")
    idx = np.add.outer(np.arange(n + 1), np.arange(n + 1))
    return BlockHankel(n, table.moments[idx])
