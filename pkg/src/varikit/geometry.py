"""Grassmann elements, dimensional constants, and ball queries.

Planes are carried as orthogonal projection matrices so that every
downstream formula (tangential divergence, fiber averages) consumes them
directly without re-orthonormalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

# Absolute tolerances for exact linear algebra (config-overridable at call
# sites that expose them).
SYMMETRY_TOL = 1e-12
IDEMPOTENT_TOL = 1e-10
TRACE_TOL = 1e-10


class DegenerateBasisError(ValueError):
    """Raised when a spanning set is numerically rank deficient."""


def unit_ball_volume(m: int) -> float:
    """Volume of the unit ball of dimension m."""
    if m < 1:
        raise ValueError(f"dimension must be a positive integer, got {m}")
    return math.pi ** (m / 2.0) / math.gamma(m / 2.0 + 1.0)


def gamma_upper(m: int) -> float:
    """Explicit upper bound for the best isoperimetric constant.

    Equals 1/2 for m = 1 and 5^m * 3^(1/(m-1)) * alpha(m)^(-1/m) for m > 1.
    The exact optimal constant is unknown for m > 1; every verification
    uses this bound on the right-hand side.
    """
    if m < 1:
        raise ValueError(f"dimension must be a positive integer, got {m}")
    if m == 1:
        return 0.5
    return 5.0**m * 3.0 ** (1.0 / (m - 1)) * unit_ball_volume(m) ** (-1.0 / m)


@dataclass(frozen=True)
class Constants:
    """Dimensional constants used on inequality right-hand sides.

    besicovitch is deliberately optional: no numeric value for the
    Besicovitch covering constant is assumed anywhere; callers that need
    it must supply one (any value >= 1 only loosens the checked bounds).
    """

    besicovitch: float | None = None
    alpha: object = field(default=unit_ball_volume, repr=False)
    gamma_up: object = field(default=gamma_upper, repr=False)


@dataclass(frozen=True)
class Subspace:
    """An element of G(n, m) stored as its orthogonal projection matrix."""

    n: int
    m: int
    proj: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.proj, dtype=float)
        if p.shape != (self.n, self.n):
            raise ValueError(f"projection must be {self.n}x{self.n}, got {p.shape}")
        if np.max(np.abs(p - p.T)) > SYMMETRY_TOL:
            raise ValueError("projection matrix is not symmetric")
        if np.max(np.abs(p @ p - p)) > IDEMPOTENT_TOL:
            raise ValueError("projection matrix is not idempotent")
        if abs(np.trace(p) - self.m) > TRACE_TOL:
            raise ValueError(
                f"trace {np.trace(p)} does not match subspace dimension {self.m}"
            )
        p.setflags(write=False)
        object.__setattr__(self, "proj", p)

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return self.proj @ np.asarray(v, dtype=float)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.n == other.n
            and self.m == other.m
            and np.array_equal(self.proj, other.proj)
        )

    def __hash__(self):
        return hash((self.n, self.m, self.proj.tobytes()))


def subspace_from_basis(vectors) -> Subspace:
    """Orthogonal projection onto the span of the given vectors."""
    b = np.atleast_2d(np.asarray(vectors, dtype=float))  # (m, n)
    m, n = b.shape
    if m > n:
        raise DegenerateBasisError(f"{m} vectors cannot be independent in R^{n}")
    sv = np.linalg.svd(b, compute_uv=False)
    if sv[-1] < 1e-10 * sv[0]:
        raise DegenerateBasisError("spanning set is numerically rank deficient")
    q, _ = np.linalg.qr(b.T)  # (n, m), orthonormal columns
    p = q @ q.T
    p = 0.5 * (p + p.T)
    return Subspace(n=n, m=m, proj=p)


def coordinate_subspace(n: int, axes) -> Subspace:
    """Span of the given coordinate axes (exact 0/1 projection matrix)."""
    axes = tuple(axes)
    p = np.zeros((n, n))
    for i in axes:
        p[i, i] = 1.0
    return Subspace(n=n, m=len(axes), proj=p)


class SpatialIndex:
    """Closed-ball queries over a weighted point set, backed by a kd-tree."""

    def __init__(self, points: np.ndarray, weights: np.ndarray):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        weights = np.asarray(weights, dtype=float)
        if len(points) != len(weights):
            raise ValueError("points and weights must have the same length")
        if len(weights) and np.min(weights) <= 0:
            raise ValueError("weights must be positive")
        self.points = points
        self.weights = weights
        self._tree = cKDTree(points) if len(points) else None

    def __len__(self) -> int:
        return len(self.points)

    def ball_query(self, a, r: float) -> np.ndarray:
        """Indices i with |x_i - a| <= r (closed ball)."""
        if r <= 0:
            raise ValueError(f"radius must be positive, got {r}")
        if self._tree is None:
            return np.array([], dtype=int)
        idx = self._tree.query_ball_point(np.asarray(a, dtype=float), r)
        return np.sort(np.asarray(idx, dtype=int))

    def ball_mass(self, a, r: float) -> float:
        """Total weight inside the closed ball B(a, r)."""
        return float(np.sum(self.weights[self.ball_query(a, r)]))


def ball_query(index: SpatialIndex, a, r: float) -> np.ndarray:
    return index.ball_query(a, r)
