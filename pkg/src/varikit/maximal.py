"""Maximal-type density ratio function, densities, and weighted medians.

The maximal function of an atomic measure diverges as the ball radius
shrinks to zero, so the supremum is truncated below at ``s_min`` (tied to
the sampling resolution).  Candidate ball centers are the atoms, the
query point, and optionally a regular grid; for each center the candidate
radii are the atom distances, where the density ratio attains its
per-center supremum (the ratio only jumps up when a ball absorbs a new
atom and decays like s^-m in between).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .families import AnalyticFamily
from .geometry import unit_ball_volume
from .varifold import DiscreteVarifold

# Relative slack used in ">= threshold" comparisons so that exact-equality
# configurations (e.g. a ball realizing the ratio d precisely) are not lost
# to the last bits of floating point rounding.
GEQ_GUARD = 1e-9


def _geq(value: float, threshold: float) -> bool:
    return value >= threshold * (1.0 - GEQ_GUARD)


@dataclass(frozen=True)
class MaximalParams:
    s_min: float
    s_max: float
    centers: str = "atoms+query"  # atoms | atoms+query | grid
    grid_spacing: float | None = None
    radii_per_center: int = 16

    def __post_init__(self):
        if not 0 < self.s_min < self.s_max:
            raise ValueError("need 0 < s_min < s_max")
        if self.centers not in ("atoms", "atoms+query", "grid"):
            raise ValueError(f"unknown center strategy {self.centers!r}")
        if self.centers == "grid" and self.grid_spacing is None:
            raise ValueError("grid strategy needs grid_spacing")
        if self.radii_per_center < 8:
            raise ValueError("radii_per_center must be at least 8")


@dataclass(frozen=True)
class MedianParams:
    lam: float = 0.5
    radius_field: object = field(default=None, repr=False)

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ValueError("lambda must lie in (0, 1)")

    def radius_at(self, a) -> float:
        if self.radius_field is None:
            raise ValueError("median params carry no radius field")
        r = float(self.radius_field(a)) if callable(self.radius_field) else float(self.radius_field)
        if r <= 0:
            raise ValueError("median radius must be positive")
        return r


def _grid_centers(v: DiscreteVarifold, spacing: float) -> np.ndarray:
    """Absolute lattice (multiples of the spacing) covering the bounding box.

    Anchoring at the origin instead of the box midpoint keeps distinguished
    symmetry centers (like the center of a sampled sphere at 0) on the
    candidate list regardless of sampling asymmetries.
    """
    lo = v.positions.min(axis=0)
    hi = v.positions.max(axis=0)
    axes = []
    for d in range(v.n):
        k_lo = int(math.floor(lo[d] / spacing))
        k_hi = int(math.ceil(hi[d] / spacing))
        axes.append(spacing * np.arange(k_lo, k_hi + 1))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([g.ravel() for g in mesh])


def _candidate_centers(v: DiscreteVarifold, p: MaximalParams, query=None) -> np.ndarray:
    parts = [v.positions]
    if p.centers in ("atoms+query", "grid") and query is not None:
        parts.append(np.atleast_2d(np.asarray(query, dtype=float)))
    if p.centers == "grid":
        parts.append(_grid_centers(v, p.grid_spacing))
    return np.vstack(parts)


def _center_sup(v: DiscreteVarifold, center: np.ndarray, s_lo: float, s_hi: float) -> float:
    """Supremum of ||V|| B(center, s) / (alpha(m) s^m) over s in [s_lo, s_hi].

    Exact for the atomic measure: evaluated at s_lo and at every atom
    distance in (s_lo, s_hi].
    """
    if s_lo > s_hi:
        return 0.0
    dist = np.linalg.norm(v.positions - center, axis=1)
    order = np.argsort(dist)
    dist = dist[order]
    cum = np.cumsum(v.weights[order])
    alpha = unit_ball_volume(v.m)
    best = 0.0
    # ratio at the lower clamp
    k = np.searchsorted(dist, s_lo, side="right")
    if k > 0:
        best = cum[k - 1] / (alpha * s_lo**v.m)
    inside = (dist > s_lo) & (dist <= s_hi)
    if np.any(inside):
        ratios = cum[inside] / (alpha * dist[inside] ** v.m)
        best = max(best, float(np.max(ratios)))
    return best


def maximal_function(v: DiscreteVarifold, x, p: MaximalParams) -> float:
    """Truncated maximal density ratio at x (certified lower bound).

    max over candidate balls B(a, s) containing x with s_min <= s <= s_max
    of ||V|| B(a, s) / (alpha(m) s^m).
    """
    if len(v) == 0:
        return 0.0
    x = np.asarray(x, dtype=float)
    best = 0.0
    for a in _candidate_centers(v, p, query=x):
        gap = float(np.linalg.norm(x - a))
        if gap > p.s_max:
            continue
        best = max(best, _center_sup(v, a, max(p.s_min, gap), p.s_max))
    return best


def superlevel_indices(v: DiscreteVarifold, d: float, p: MaximalParams) -> np.ndarray:
    """Atoms x with (truncated) M(x) >= d.

    Computed ball-first: an atom is in the superlevel set exactly when
    some candidate ball of ratio >= d contains it, which mirrors the
    containment property of the maximal function and avoids a per-atom
    scan over all centers.
    """
    if d <= 0:
        raise ValueError("superlevel threshold must be positive")
    if len(v) == 0:
        return np.array([], dtype=int)
    alpha = unit_ball_volume(v.m)
    marked = np.zeros(len(v), dtype=bool)
    centers = _candidate_centers(v, p)
    block = max(1, int(5e6 // max(1, len(v))))
    for start in range(0, len(centers), block):
        chunk = centers[start : start + block]
        dist = np.linalg.norm(v.positions[None, :, :] - chunk[:, None, :], axis=2)
        order = np.argsort(dist, axis=1)
        dsort = np.take_along_axis(dist, order, axis=1)
        cum = np.cumsum(v.weights[order], axis=1)
        for i in range(len(chunk)):
            ds, cs = dsort[i], cum[i]
            radii = np.maximum(ds, p.s_min)
            ok = (radii <= p.s_max) & _geq_array(cs, d * alpha * radii**v.m)
            if np.any(ok):
                r_best = float(np.max(radii[ok]))
                marked |= dist[i] <= r_best
            if np.all(marked):
                return np.flatnonzero(marked)
    return np.flatnonzero(marked)


def _geq_array(values: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    return values >= thresholds * (1.0 - GEQ_GUARD)


def superlevel_mass(v: DiscreteVarifold, d: float, p: MaximalParams) -> float:
    """||V|| of the d-superlevel set of the truncated maximal function."""
    return float(np.sum(v.weights[superlevel_indices(v, d, p)]))


def density(target, x, s_min: float | None = None) -> tuple[float, bool]:
    """m-density of the weight measure at x; (value, exact flag).

    Analytic families return closed-form values; discrete varifolds
    return the ball ratio at the truncation radius, flagged approximate.
    """
    if isinstance(target, AnalyticFamily):
        return float(target.density_at(x)), True
    v = target
    if s_min is None:
        raise ValueError("discrete density needs a truncation radius s_min")
    alpha = unit_ball_volume(v.m)
    return v.ball_mass(x, s_min) / (alpha * s_min**v.m), False


def median_g(v: DiscreteVarifold, f, a, p: MedianParams) -> float | None:
    """Weighted lambda-quantile of f over the closed ball B(a, r(a)).

    Returns sup { y : mass{f <= y} <= lam * ball mass }: the smallest atom
    value whose cumulative mass exceeds the lambda fraction.  An empty
    ball yields None (the point is excluded from Sobolev regions rather
    than propagating an infinite supremum).
    """
    idx = v.ball_indices(a, p.radius_at(a))
    if len(idx) == 0:
        return None
    vals = np.array([f(x) for x in v.positions[idx]])
    wts = v.weights[idx]
    order = np.argsort(vals, kind="stable")
    vals, wts = vals[order], wts[order]
    cum = np.cumsum(wts)
    cut = p.lam * cum[-1]
    above = np.flatnonzero(cum > cut * (1.0 + GEQ_GUARD))
    if len(above) == 0:
        return float(vals[-1])
    return float(vals[above[0]])


def lower_density_region(v: DiscreteVarifold, d: float, mode: str = "ball_ratio",
                         radius_field=None, family: AnalyticFamily | None = None) -> np.ndarray:
    """Atom indices in the region A of the Sobolev theorems.

    mode 'ball_ratio': finite ||V|| B(a, r(a)) >= d * alpha(m) * r(a)^m.
    mode 'density':    family-exact density at the atom >= d.
    """
    if d <= 0:
        raise ValueError("threshold d must be positive")
    if len(v) == 0:
        return np.array([], dtype=int)
    if mode == "ball_ratio":
        if radius_field is None:
            raise ValueError("ball_ratio mode needs a radius field")
        alpha = unit_ball_volume(v.m)
        out = []
        for i, a in enumerate(v.positions):
            r = float(radius_field(a)) if callable(radius_field) else float(radius_field)
            if _geq(v.ball_mass(a, r), d * alpha * r**v.m):
                out.append(i)
        return np.asarray(out, dtype=int)
    if mode == "density":
        fam = family if family is not None else (v.meta[0] if v.meta else None)
        if fam is None:
            raise ValueError("density mode needs an analytic family")
        keep = [i for i, a in enumerate(v.positions) if _geq(fam.density_at(a), d)]
        return np.asarray(keep, dtype=int)
    raise ValueError(f"unknown region mode {mode!r}")
