"""Atomic representation of general m-varifolds in R^n.

A discrete varifold is a weighted quadrature of a measure on
R^n x G(n, m): a list of (position, plane, weight) atoms plus a spatial
index over the positions.  All weight-measure queries reduce to sums.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import SpatialIndex, Subspace


class EmptyFiberError(ValueError):
    """Raised when a disintegration fiber is requested at a bare point."""


@dataclass(frozen=True)
class Atom:
    position: np.ndarray
    plane: Subspace
    weight: float

    def __post_init__(self):
        if self.weight <= 0:
            raise ValueError(f"atom weight must be positive, got {self.weight}")


class DiscreteVarifold:
    """Weighted quadrature points (x, P, w) with a ball-query index.

    Immutable after construction; every query is read-only.  Atoms with
    identical positions are allowed (distinct planes at one point).
    """

    def __init__(self, m: int, n: int, positions, planes, weights, meta=None):
        if not 1 <= m <= n:
            raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
        positions = np.atleast_2d(np.asarray(positions, dtype=float))
        weights = np.asarray(weights, dtype=float)
        planes = np.asarray(planes, dtype=float)
        if positions.size == 0:
            positions = positions.reshape(0, n)
            planes = planes.reshape(0, n, n)
            weights = weights.reshape(0)
        if positions.shape[1] != n:
            raise ValueError("positions have wrong ambient dimension")
        if planes.shape != (len(positions), n, n):
            raise ValueError("planes must be one n x n projection per atom")
        if len(weights) != len(positions):
            raise ValueError("weights and positions must have the same length")
        self.m = m
        self.n = n
        self.positions = positions
        self.planes = planes
        self.weights = weights
        self.meta = meta
        self.index = SpatialIndex(positions, weights) if len(weights) else None
        for arr in (self.positions, self.planes, self.weights):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.weights)

    @classmethod
    def from_atoms(cls, m: int, n: int, atoms, meta=None) -> "DiscreteVarifold":
        atoms = list(atoms)
        return cls(
            m,
            n,
            [a.position for a in atoms],
            [a.plane.proj for a in atoms],
            [a.weight for a in atoms],
            meta=meta,
        )

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def ball_mass(self, a, r: float) -> float:
        """||V|| B(a, r): total weight of atoms in the closed ball."""
        if self.index is None:
            return 0.0
        return self.index.ball_mass(a, r)

    def ball_indices(self, a, r: float) -> np.ndarray:
        if self.index is None:
            return np.array([], dtype=int)
        return self.index.ball_query(a, r)

    def disintegrate(self, x) -> list[tuple[Subspace, float]]:
        """The normalized plane distribution over the fiber at x.

        Requires at least one atom exactly at x; probabilities sum to 1.
        """
        x = np.asarray(x, dtype=float)
        mask = np.all(self.positions == x, axis=1) if len(self) else np.array([])
        idx = np.flatnonzero(mask)
        if len(idx) == 0:
            raise EmptyFiberError(f"no atom at position {x}")
        total = float(np.sum(self.weights[idx]))
        return [
            (Subspace(self.n, self.m, self.planes[i]), float(self.weights[i] / total))
            for i in idx
        ]

    def fiber_projection(self, x) -> np.ndarray:
        """q(x): the probability-averaged projection over the fiber at x."""
        fiber = self.disintegrate(x)
        q = np.zeros((self.n, self.n))
        for plane, p in fiber:
            q += p * plane.proj
        return q

    def restrict(self, predicate) -> "DiscreteVarifold":
        """V restricted to E x G(n, m) for a point predicate E."""
        if len(self) == 0:
            return DiscreteVarifold(self.m, self.n, [], [], [], meta=self.meta)
        keep = np.fromiter(
            (bool(predicate(x)) for x in self.positions), dtype=bool, count=len(self)
        )
        return self.subset(np.flatnonzero(keep))

    def subset(self, indices) -> "DiscreteVarifold":
        indices = np.asarray(indices, dtype=int)
        return DiscreteVarifold(
            self.m,
            self.n,
            self.positions[indices].reshape(len(indices), self.n),
            self.planes[indices].reshape(len(indices), self.n, self.n),
            self.weights[indices],
            meta=self.meta,
        )

    def scaled(self, lam: float) -> "DiscreteVarifold":
        """Spatial dilation: positions lam*x, weights lam^m * w."""
        return DiscreteVarifold(
            self.m,
            self.n,
            lam * self.positions,
            self.planes.copy(),
            lam**self.m * self.weights,
            meta=None,
        )


def save_csv(v: DiscreteVarifold, path) -> None:
    """One atom per row: n positions, n^2 plane entries (row-major), weight.

    Floats are written with shortest round-trip repr, so a load followed by
    a save reproduces the numeric fields bit-exactly.
    """
    n = v.n
    cols = (
        [f"x{i}" for i in range(n)]
        + [f"p{i}{j}" for i in range(n) for j in range(n)]
        + ["weight"]
    )
    with open(path, "w", newline="") as fh:
        fh.write(f"# varifold m={v.m} n={v.n}\n")
        fh.write(",".join(cols) + "\n")
        for k in range(len(v)):
            row = (
                [repr(float(x)) for x in v.positions[k]]
                + [repr(float(x)) for x in v.planes[k].ravel()]
                + [repr(float(v.weights[k]))]
            )
            fh.write(",".join(row) + "\n")


def load_csv(path) -> DiscreteVarifold:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# varifold"):
            raise ValueError(f"{path}: missing varifold header line")
        fields = dict(tok.split("=") for tok in header.split()[2:])
        m, n = int(fields["m"]), int(fields["n"])
        fh.readline()  # column names
        rows = [line.strip().split(",") for line in fh if line.strip()]
    if not rows:
        return DiscreteVarifold(m, n, [], [], [])
    data = np.array([[float(x) for x in row] for row in rows])
    positions = data[:, :n]
    planes = data[:, n : n + n * n].reshape(-1, n, n)
    weights = data[:, -1]
    return DiscreteVarifold(m, n, positions, planes, weights)
