"""Parametric varifolds with exact mass, density, and first-variation data.

Four families cover the regimes exercised by the inequality experiments:

* ``SphereShell``  -- round m-sphere (m = 1 or 2) in the leading (m+1)
  coordinates, constant mean curvature m/r.
* ``FlatDisc``     -- m-disc in an arbitrary plane, boundary conormal only.
* ``PlaneBundle``  -- k parallel affine copies of an m-plane, optionally
  clipped by a ball; the rectifiable approximant of a diffused measure.
* ``ProductSlab``  -- Lebesgue measure (restricted to a box) times a fixed
  plane; the canonical non-rectifiable example.

Sampling is deterministic midpoint-style quadrature; the per-atom weights
are exact partitions of the family mass, so a sample's total weight always
matches ``total_mass`` exactly (clipped geometry included).
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import Subspace, unit_ball_volume
from .varifold import DiscreteVarifold


class ResolutionError(ValueError):
    """Raised when a sampling resolution is too coarse for the geometry."""


class UnsupportedFamilyError(ValueError):
    """Raised when a family lacks the analytic data an operation needs."""


class DeltaAtoms:
    """Atomic quadrature of the vector measure delta V.

    delta V (theta) ~= sum_i w_i * theta(x_i) . v_i with |v_i| = 1, so the
    weights are a quadrature of ||delta V||.
    """

    def __init__(self, positions, directions, weights):
        self.positions = np.atleast_2d(np.asarray(positions, dtype=float))
        self.directions = np.atleast_2d(np.asarray(directions, dtype=float))
        self.weights = np.asarray(weights, dtype=float)

    def __len__(self):
        return len(self.weights)

    def pair_vector_field(self, theta) -> float:
        """delta V (theta) for a vector field theta(x) -> R^n."""
        if len(self) == 0:
            return 0.0
        vals = np.array([theta(x) for x in self.positions])
        return float(np.sum(self.weights * np.einsum("ij,ij->i", vals, self.directions)))

    def integrate_scalar(self, f) -> float:
        """Integral of f against ||delta V||."""
        if len(self) == 0:
            return 0.0
        return float(np.sum(self.weights * np.array([f(x) for x in self.positions])))


def _circle_nodes(h: float, radius: float):
    """Midpoint angles and equal length fractions for a circle of radius r."""
    count = max(8, int(math.ceil(2 * math.pi * radius / h)))
    angles = (np.arange(count) + 0.5) * (2 * math.pi / count)
    return angles, np.full(count, 1.0 / count)


def _sphere_nodes(h: float, radius: float):
    """Unit points on S^2 with exact latitude-band area fractions."""
    n_theta = max(4, int(math.ceil(math.pi * radius / h)))
    edges = np.linspace(0.0, math.pi, n_theta + 1)
    pts, fracs = [], []
    for i in range(n_theta):
        t0, t1 = edges[i], edges[i + 1]
        band = 0.5 * (math.cos(t0) - math.cos(t1))  # fraction of total area
        tm = 0.5 * (t0 + t1)
        n_phi = max(6, int(math.ceil(2 * math.pi * radius * math.sin(tm) / h)))
        phis = (np.arange(n_phi) + 0.5) * (2 * math.pi / n_phi)
        st, ct = math.sin(tm), math.cos(tm)
        for phi in phis:
            pts.append((st * math.cos(phi), st * math.sin(phi), ct))
            fracs.append(band / n_phi)
    return np.array(pts), np.array(fracs)


def _disc_nodes(m: int, h: float, radius: float):
    """Points in the unit m-disc (scaled by radius) with exact mass fractions.

    Rings/shells carry their exact share of alpha(m) * radius^m, so the
    fractions sum to 1 to rounding.
    """
    if m == 1:
        count = max(4, int(math.ceil(2 * radius / h)))
        xs = -radius + (np.arange(count) + 0.5) * (2 * radius / count)
        return xs.reshape(-1, 1), np.full(count, 1.0 / count)
    n_s = max(3, int(math.ceil(radius / h)))
    edges = np.linspace(0.0, radius, n_s + 1)
    pts, fracs = [], []
    for i in range(n_s):
        s0, s1 = edges[i], edges[i + 1]
        shell = (s1**m - s0**m) / radius**m  # exact fraction of disc mass
        sm = 0.5 * (s0 + s1)
        if m == 2:
            angles, af = _circle_nodes(h, sm)
            ring = np.column_stack([sm * np.cos(angles), sm * np.sin(angles)])
        elif m == 3:
            units, af = _sphere_nodes(h, sm)
            ring = sm * units
        else:
            raise UnsupportedFamilyError(f"disc sampling implemented for m <= 3, got {m}")
        pts.append(ring)
        fracs.append(shell * af)
    return np.vstack(pts), np.concatenate(fracs)


def _sphere_surface_nodes(m: int, h: float, radius: float):
    """Points on the (m-1)-sphere of given radius with exact area fractions."""
    if m == 1:
        return np.array([[-radius], [radius]]), np.array([0.5, 0.5])
    if m == 2:
        angles, fr = _circle_nodes(h, radius)
        return np.column_stack([radius * np.cos(angles), radius * np.sin(angles)]), fr
    if m == 3:
        units, fr = _sphere_nodes(h, radius)
        return radius * units, fr
    raise UnsupportedFamilyError(f"sphere sampling implemented for m <= 3, got {m}")


def _plane_basis(plane: Subspace) -> np.ndarray:
    """Orthonormal basis (columns) of the plane from its projection matrix."""
    vals, vecs = np.linalg.eigh(plane.proj)
    return vecs[:, vals > 0.5]


class AnalyticFamily:
    """Common surface of the parametric varifold families."""

    m: int
    n: int

    @property
    def total_mass(self) -> float:
        raise NotImplementedError

    @property
    def delta_total_mass(self) -> float:
        raise NotImplementedError

    def density_at(self, x) -> float:
        raise NotImplementedError

    def sample(self, h: float) -> DiscreteVarifold:
        raise NotImplementedError

    def delta_atoms(self, h: float) -> DeltaAtoms:
        """Quadrature of delta V from closed-form curvature/boundary data."""
        raise UnsupportedFamilyError(
            f"{type(self).__name__} carries no analytic first-variation data"
        )

    def ball_mass_exact(self, a, r: float) -> float:
        """||V|| B(a, r) in closed form, where the geometry admits one."""
        raise UnsupportedFamilyError(
            f"{type(self).__name__} has no closed-form ball mass at this point"
        )

    def dilated(self, lam: float) -> "AnalyticFamily":
        raise UnsupportedFamilyError(f"{type(self).__name__} does not support dilation")

    def _check_resolution(self, h: float, feature: float) -> None:
        if h <= 0:
            raise ResolutionError(f"resolution must be positive, got {h}")
        if h > feature / 4.0:
            raise ResolutionError(
                f"resolution h={h} too coarse for feature size {feature} (need h <= feature/4)"
            )


class SphereShell(AnalyticFamily):
    """Round m-sphere of radius r in the leading (m+1) coordinates of R^n."""

    def __init__(self, m: int, n: int, radius: float, center=None, multiplicity: float = 1.0):
        if m not in (1, 2):
            raise UnsupportedFamilyError(f"SphereShell supports m in (1, 2), got {m}")
        if n < m + 1:
            raise ValueError(f"need n >= m+1 for an m-sphere, got n={n}")
        if radius <= 0 or multiplicity <= 0:
            raise ValueError("radius and multiplicity must be positive")
        self.m, self.n = m, n
        self.radius = float(radius)
        self.center = np.zeros(n) if center is None else np.asarray(center, dtype=float)
        self.multiplicity = float(multiplicity)

    @property
    def total_mass(self) -> float:
        m, r = self.m, self.radius
        area = (m + 1) * unit_ball_volume(m + 1) * r**m
        return self.multiplicity * area

    @property
    def delta_total_mass(self) -> float:
        return (self.m / self.radius) * self.total_mass

    def _surface_nodes(self, h: float):
        """Unit outward normals (embedded in R^n) and area fractions."""
        if self.m == 1:
            angles, fr = _circle_nodes(h, self.radius)
            units = np.zeros((len(fr), self.n))
            units[:, 0] = np.cos(angles)
            units[:, 1] = np.sin(angles)
        else:
            pts, fr = _sphere_nodes(h, self.radius)
            units = np.zeros((len(fr), self.n))
            units[:, :3] = pts
        return units, fr

    def sample(self, h: float) -> DiscreteVarifold:
        self._check_resolution(h, self.radius)
        units, fr = self._surface_nodes(h)
        positions = self.center + self.radius * units
        sub = np.zeros((self.n, self.n))
        sub[: self.m + 1, : self.m + 1] = np.eye(self.m + 1)
        planes = sub - np.einsum("ki,kj->kij", units, units)
        weights = self.total_mass * fr
        return DiscreteVarifold(
            self.m, self.n, positions, planes, weights, meta=(self, h)
        )

    def delta_atoms(self, h: float) -> DeltaAtoms:
        units, fr = self._surface_nodes(h)
        positions = self.center + self.radius * units
        weights = self.delta_total_mass * fr
        return DeltaAtoms(positions, units, weights)

    def density_at(self, x, tol: float = 1e-9) -> float:
        d = np.asarray(x, dtype=float) - self.center
        off = np.linalg.norm(d[self.m + 1 :]) if self.n > self.m + 1 else 0.0
        rad = np.linalg.norm(d[: self.m + 1])
        on_shell = off <= tol and abs(rad - self.radius) <= tol
        return self.multiplicity if on_shell else 0.0

    def ball_mass_exact(self, a, r: float) -> float:
        """Closed-form spherical cap / circular arc mass, any center a."""
        d = np.asarray(a, dtype=float) - self.center
        b = np.linalg.norm(d[: self.m + 1])
        z2 = float(np.sum(d[self.m + 1 :] ** 2)) if self.n > self.m + 1 else 0.0
        R = self.radius
        if b == 0.0:
            inside = z2 + R**2 <= r**2
            return self.total_mass if inside else 0.0
        c = (z2 + b**2 + R**2 - r**2) / (2.0 * R * b)
        c = min(1.0, max(-1.0, c))
        if self.m == 1:
            return self.multiplicity * 2.0 * R * math.acos(c)
        return self.multiplicity * 2.0 * math.pi * R**2 * (1.0 - c)

    def dilated(self, lam: float) -> "SphereShell":
        return SphereShell(
            self.m, self.n, lam * self.radius, lam * self.center, self.multiplicity
        )


class FlatDisc(AnalyticFamily):
    """Multiplicity-weighted m-disc in an arbitrary plane of R^n."""

    def __init__(self, plane: Subspace, radius: float, center=None, multiplicity: float = 1.0):
        if radius <= 0 or multiplicity <= 0:
            raise ValueError("radius and multiplicity must be positive")
        self.m, self.n = plane.m, plane.n
        self.plane = plane
        self.radius = float(radius)
        self.center = (
            np.zeros(self.n) if center is None else np.asarray(center, dtype=float)
        )
        self.multiplicity = float(multiplicity)
        self._basis = _plane_basis(plane)  # (n, m)

    @property
    def total_mass(self) -> float:
        return self.multiplicity * unit_ball_volume(self.m) * self.radius**self.m

    @property
    def delta_total_mass(self) -> float:
        m = self.m
        return self.multiplicity * m * unit_ball_volume(m) * self.radius ** (m - 1)

    def sample(self, h: float) -> DiscreteVarifold:
        self._check_resolution(h, self.radius)
        local, fr = _disc_nodes(self.m, h, self.radius)
        positions = self.center + local @ self._basis.T
        planes = np.broadcast_to(self.plane.proj, (len(fr), self.n, self.n)).copy()
        weights = self.total_mass * fr
        return DiscreteVarifold(self.m, self.n, positions, planes, weights, meta=(self, h))

    def delta_atoms(self, h: float) -> DeltaAtoms:
        local, fr = _sphere_surface_nodes(self.m, h, self.radius)
        positions = self.center + local @ self._basis.T
        directions = (local / self.radius) @ self._basis.T  # outward conormal
        weights = self.delta_total_mass * fr
        return DeltaAtoms(positions, directions, weights)

    def density_at(self, x, tol: float = 1e-9) -> float:
        d = np.asarray(x, dtype=float) - self.center
        inplane = self._basis.T @ d
        off = np.linalg.norm(d - self._basis @ inplane)
        if off > tol:
            return 0.0
        rho = np.linalg.norm(inplane)
        if rho < self.radius - tol:
            return self.multiplicity
        if rho > self.radius + tol:
            return 0.0
        return 0.5 * self.multiplicity  # edge point

    def ball_mass_exact(self, a, r: float) -> float:
        """Exact for centers on the axis through the disc center."""
        d = np.asarray(a, dtype=float) - self.center
        inplane = self._basis.T @ d
        if np.linalg.norm(inplane) > 1e-12:
            raise UnsupportedFamilyError(
                "closed-form disc ball mass requires a center on the disc axis"
            )
        z2 = float(d @ d)
        if r**2 <= z2:
            return 0.0
        rho = min(self.radius, math.sqrt(r**2 - z2))
        return self.multiplicity * unit_ball_volume(self.m) * rho**self.m

    def dilated(self, lam: float) -> "FlatDisc":
        return FlatDisc(self.plane, lam * self.radius, lam * self.center, self.multiplicity)


class PlaneBundle(AnalyticFamily):
    """k parallel affine copies of an m-plane, optionally clipped by a ball.

    ``clip`` cuts every plane by the closed ball B(0, clip), turning the
    bundle into a union of discs with boundary first variation.  With
    ``clip=None`` the planes are complete (delta V = 0, infinite mass) and
    ``window`` bounds the sampled portion.
    """

    def __init__(self, plane: Subspace, offsets, weight: float, clip: float | None = None,
                 window: float | None = None):
        self.m, self.n = plane.m, plane.n
        if self.m >= self.n:
            raise ValueError("a proper bundle needs m < n")
        self.plane = plane
        self._basis = _plane_basis(plane)
        offs = np.atleast_2d(np.asarray(offsets, dtype=float))
        # keep only the component orthogonal to the plane
        self.offsets = offs - (offs @ self._basis) @ self._basis.T
        if weight <= 0:
            raise ValueError("per-plane weight must be positive")
        self.weight = float(weight)
        self.clip = None if clip is None else float(clip)
        self.window = window
        if self.clip is not None:
            inside = np.linalg.norm(self.offsets, axis=1) < self.clip
            if not np.all(inside):
                raise ValueError("every offset must lie strictly inside the clip ball")

    @classmethod
    def parallel_lines(cls, k: int, weight: float | None = None, clip: float | None = 1.0,
                       window: float | None = None, target_mass: float | None = None,
                       n: int = 2):
        """k lines parallel to the first axis at equispaced offsets in (-1, 1).

        With ``target_mass`` the per-line weight is chosen so the bundle
        carries exactly that mass inside B(0, 1).
        """
        from .geometry import coordinate_subspace

        offsets = np.zeros((k, n))
        offsets[:, 1] = -1.0 + (2.0 * np.arange(k) + 1.0) / k
        if target_mass is not None:
            chords = 2.0 * np.sqrt(1.0 - offsets[:, 1] ** 2)
            weight = target_mass / float(np.sum(chords))
        if weight is None:
            raise ValueError("either weight or target_mass is required")
        return cls(coordinate_subspace(n, [0]), offsets, weight, clip=clip, window=window)

    def _plane_radii(self, bound: float) -> np.ndarray:
        d2 = np.sum(self.offsets**2, axis=1)
        return np.sqrt(np.maximum(0.0, bound**2 - d2))

    @property
    def total_mass(self) -> float:
        if self.clip is None:
            return math.inf
        radii = self._plane_radii(self.clip)
        return self.weight * unit_ball_volume(self.m) * float(np.sum(radii**self.m))

    def mass_in_ball(self, r: float) -> float:
        """Exact bundle mass inside B(0, r) (clip applied if present)."""
        bound = r if self.clip is None else min(r, self.clip)
        radii = self._plane_radii(bound)
        return self.weight * unit_ball_volume(self.m) * float(np.sum(radii**self.m))

    def ball_mass_exact(self, a, r: float) -> float:
        if np.linalg.norm(np.asarray(a, dtype=float)) > 1e-12:
            raise UnsupportedFamilyError(
                "closed-form bundle ball mass implemented for balls centered at 0"
            )
        return self.mass_in_ball(r)

    @property
    def delta_total_mass(self) -> float:
        if self.clip is None:
            return 0.0
        m = self.m
        radii = self._plane_radii(self.clip)
        return self.weight * m * unit_ball_volume(m) * float(np.sum(radii ** (m - 1)))

    def density_at(self, x, tol: float = 1e-9) -> float:
        d = np.asarray(x, dtype=float)
        perp = d - self._basis @ (self._basis.T @ d)
        on_plane = np.linalg.norm(self.offsets - perp, axis=1) <= tol
        if not np.any(on_plane):
            return 0.0
        if self.clip is not None and np.linalg.norm(d) > self.clip - tol:
            return 0.0 if np.linalg.norm(d) > self.clip + tol else 0.5 * self.weight
        return self.weight

    def _discs(self, bound: float) -> list[FlatDisc]:
        radii = self._plane_radii(bound)
        out = []
        for off, rho in zip(self.offsets, radii):
            if rho > 0:
                out.append(FlatDisc(self.plane, rho, center=off, multiplicity=self.weight))
        return out

    def sample(self, h: float) -> DiscreteVarifold:
        bound = self.clip if self.clip is not None else self.window
        if bound is None:
            raise ResolutionError("an unclipped bundle needs a sampling window")
        if len(self.offsets) > 1:
            d = self.offsets[:, None, :] - self.offsets[None, :, :]
            spacing = np.min(np.linalg.norm(d, axis=2) + np.diag(np.full(len(self.offsets), np.inf)))
            self._check_resolution(h, min(spacing * 4.0, bound))
        parts = [disc.sample(h) for disc in self._discs(bound)]
        return DiscreteVarifold(
            self.m,
            self.n,
            np.vstack([p.positions for p in parts]),
            np.vstack([p.planes for p in parts]),
            np.concatenate([p.weights for p in parts]),
            meta=(self, h),
        )

    def delta_atoms(self, h: float) -> DeltaAtoms:
        if self.clip is None:
            return DeltaAtoms(np.zeros((0, self.n)), np.zeros((0, self.n)), [])
        parts = [disc.delta_atoms(h) for disc in self._discs(self.clip)]
        return DeltaAtoms(
            np.vstack([p.positions for p in parts]),
            np.vstack([p.directions for p in parts]),
            np.concatenate([p.weights for p in parts]),
        )


class ProductSlab(AnalyticFamily):
    """Lebesgue measure on a box times a fixed plane delta.

    With ``unbounded=True`` the box is only a sampling window for the
    measure L^n x delta_T on all of R^n (delta V = 0); operations pairing
    test functions against it require their supports inside the box.
    """

    def __init__(self, plane: Subspace, lo, hi, density: float = 1.0, unbounded: bool = False):
        self.m, self.n = plane.m, plane.n
        if self.m >= self.n:
            raise ValueError("a slab needs m < n")
        self.plane = plane
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        if self.lo.shape != (self.n,) or self.hi.shape != (self.n,):
            raise ValueError("box corners must be n-vectors")
        if np.any(self.hi <= self.lo):
            raise ValueError("box must have positive side lengths")
        if density <= 0:
            raise ValueError("density must be positive")
        self.density = float(density)
        self.unbounded = unbounded

    @property
    def total_mass(self) -> float:
        if self.unbounded:
            return math.inf
        return self.density * float(np.prod(self.hi - self.lo))

    @property
    def window_mass(self) -> float:
        return self.density * float(np.prod(self.hi - self.lo))

    @property
    def delta_total_mass(self) -> float:
        if self.unbounded:
            return 0.0
        sides = self.hi - self.lo
        total = 0.0
        for axis in range(self.n):
            tangential = math.sqrt(max(0.0, self.plane.proj[axis, axis]))
            face = float(np.prod(np.delete(sides, axis)))
            total += 2.0 * tangential * face * self.density
        return total

    def density_at(self, x, tol: float = 1e-9) -> float:
        # An n-dimensional measure has vanishing m-density for m < n:
        # ||V|| B(x, r) ~ r^n makes the ratio to alpha(m) r^m go to 0.
        return 0.0

    def contains_support(self, center, radius: float) -> bool:
        c = np.asarray(center, dtype=float)
        return bool(np.all(c - radius >= self.lo) and np.all(c + radius <= self.hi))

    def sample(self, h: float) -> DiscreteVarifold:
        sides = self.hi - self.lo
        self._check_resolution(h, float(np.min(sides)) )
        counts = [max(2, int(math.ceil(s / h))) for s in sides]
        grids = [
            self.lo[i] + (np.arange(counts[i]) + 0.5) * (sides[i] / counts[i])
            for i in range(self.n)
        ]
        mesh = np.meshgrid(*grids, indexing="ij")
        positions = np.column_stack([g.ravel() for g in mesh])
        cell = float(np.prod(sides / np.asarray(counts, dtype=float)))
        weights = np.full(len(positions), self.density * cell)
        planes = np.broadcast_to(self.plane.proj, (len(positions), self.n, self.n)).copy()
        return DiscreteVarifold(self.m, self.n, positions, planes, weights, meta=(self, h))

    def delta_atoms(self, h: float) -> DeltaAtoms:
        if self.unbounded:
            return DeltaAtoms(np.zeros((0, self.n)), np.zeros((0, self.n)), [])
        raise UnsupportedFamilyError(
            "bounded slab boundary quadrature is not implemented; use unbounded slabs"
        )

    def ball_mass_exact(self, a, r: float) -> float:
        """Exact when B(a, r) lies inside the box or contains it."""
        a = np.asarray(a, dtype=float)
        if self.contains_support(a, r):
            return self.density * unit_ball_volume(self.n) * r**self.n
        corners_in = all(
            np.linalg.norm(np.where(mask, self.hi, self.lo) - a) <= r
            for mask in np.ndindex(*(2,) * self.n)
        )
        if corners_in:
            return self.window_mass
        raise UnsupportedFamilyError(
            "closed-form slab ball mass needs the ball inside or containing the box"
        )
