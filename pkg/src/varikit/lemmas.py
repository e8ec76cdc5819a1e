"""Lemma-level utilities: iteration, calculus witness, weak-L^p, layer cake.

Each operation comes with a checker used by the randomized suites; the
generators that build admissible random instances live in the test suite,
next to the independent oracles they are checked against.
"""

from __future__ import annotations

import math

import numpy as np


class HypothesisError(ValueError):
    """Raised when a lemma's stated preconditions fail on the given grid."""


def iteration_bound(kappa: float, lam: float, mu: float, d) -> np.ndarray:
    """Upper bound for a(d)^(1-mu): kappa * d^-mu * (1/lam)^(mu^2 / (1-mu))."""
    _check_iteration_params(kappa, lam, mu)
    d = np.asarray(d, dtype=float)
    return kappa * d**-mu * (1.0 / lam) ** (mu * mu / (1.0 - mu))


def _check_iteration_params(kappa, lam, mu):
    if not 0.0 <= kappa < math.inf:
        raise ValueError("kappa must be a nonnegative real number")
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda must lie in (0, 1)")
    if not 0.0 < mu < 1.0:
        raise ValueError("mu must lie in (0, 1)")


def check_iteration(d_grid, a_values, kappa: float, lam: float, mu: float,
                    rel_tol: float = 1e-9) -> bool:
    """Verify the iteration hypothesis on a geometric grid, then the bound.

    Hypothesis: a(d) <= kappa * d^-mu * a(lam*d)^mu for every grid pair
    (d, lam*d) with lam*d on the grid (lam must be an integer power of the
    grid ratio).  When it holds, asserts
    a(d)^(1-mu) <= kappa * d^-mu * (1/lam)^(mu^2/(1-mu)) at every point.

    Returns True when the conclusion holds everywhere; HypothesisError if
    the hypothesis itself fails (the lemma then promises nothing).
    """
    _check_iteration_params(kappa, lam, mu)
    d = np.asarray(d_grid, dtype=float)
    a = np.asarray(a_values, dtype=float)
    if len(d) < 3 or np.any(d <= 0) or np.any(a < 0):
        raise ValueError("need a positive geometric grid and nonnegative a")
    ratios = d[1:] / d[:-1]
    ratio = ratios[0]
    if np.max(np.abs(ratios - ratio)) > 1e-9 * ratio:
        raise ValueError("grid must be geometric")
    # lam*d must land on the grid: lam = ratio^-shift for integer shift > 0
    shift = math.log(lam) / math.log(ratio)
    shift_i = round(shift)
    if abs(shift - shift_i) > 1e-6 or shift_i == 0:
        raise ValueError("lambda must be an integer power of the grid ratio")
    # index of lam*d relative to d: step backwards on an increasing grid
    for i in range(len(d)):
        j = i - abs(shift_i) if ratio > 1 else i + abs(shift_i)
        if not 0 <= j < len(d):
            continue
        rhs = kappa * d[i] ** -mu * a[j] ** mu
        if a[i] > rhs * (1.0 + rel_tol) + 1e-300:
            raise HypothesisError(
                f"iteration hypothesis fails at d={d[i]}: a={a[i]} > {rhs}"
            )
    bound = iteration_bound(kappa, lam, mu, d)
    return bool(np.all(a ** (1.0 - mu) <= bound * (1.0 + rel_tol) + 1e-300))


def calculus_find_t(f, g, s: float, m: float, grid_points: int = 256,
                    max_refinements: int = 2):
    """Find a grid point t in [s, r] with f(5t) <= 5^m * r * g(t).

    f must be nonnegative and nondecreasing on [s, infinity), with
    s^-m f(s) >= 3/4 and r = sup{t : t^-m f(t) >= 1/3} finite; g is
    nonnegative on [s, r] and must satisfy the integral hypothesis
    t^-m f(t) <= r^-m f(r) + integral_t^r u^-m g(u) du (checked by
    trapezoid quadrature on the same grid).  The lemma guarantees a
    continuum witness, so failure to find one on the grid triggers a grid
    refinement; (t, refinements_used) is returned, t=None only if every
    refinement fails (resolution failure).
    """
    if s <= 0 or m <= 0:
        raise ValueError("need s > 0 and m > 0")
    if f(s) / s**m < 0.75 * (1.0 - 1e-12):
        raise HypothesisError(f"s^-m f(s) = {f(s) / s**m} < 3/4")
    r = _locate_r(f, s, m)
    for refinement in range(max_refinements + 1):
        pts = grid_points * 2**refinement
        t = np.linspace(s, r, pts)
        fv = np.array([f(x) for x in t])
        gv = np.array([g(x) for x in t])
        if np.any(gv < -1e-12) or np.any(np.diff(fv) < -1e-9 * max(1.0, fv[-1])):
            raise HypothesisError("f must be nondecreasing and g nonnegative")
        _check_integral_hypothesis(t, fv, gv, r, m)
        f5 = np.array([f(5.0 * x) for x in t])
        ok = np.flatnonzero(f5 <= 5.0**m * r * gv * (1.0 + 1e-9) + 1e-300)
        if len(ok):
            return float(t[ok[0]]), refinement
    return None, max_refinements


def _locate_r(f, s: float, m: float) -> float:
    """r = sup { t >= s : t^-m f(t) >= 1/3 }, located by bracketing."""
    phi = lambda t: f(t) / t**m
    if phi(s) < 1.0 / 3.0:
        return s
    hi = s
    for _ in range(200):
        hi *= 2.0
        if phi(hi) < 1.0 / 3.0:
            break
    else:
        raise HypothesisError("t^-m f(t) never drops below 1/3: r is not finite")
    lo = hi / 2.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if phi(mid) >= 1.0 / 3.0:
            lo = mid
        else:
            hi = mid
    return lo


def _check_integral_hypothesis(t, fv, gv, r, m):
    integrand = t**-m * gv
    # cumulative trapezoid of integral_t^r u^-m g(u) du
    seg = 0.5 * (integrand[1:] + integrand[:-1]) * np.diff(t)
    tail = np.concatenate([np.cumsum(seg[::-1])[::-1], [0.0]])
    phi = fv / t**m
    bound = phi[-1] + tail
    bad = phi > bound * (1.0 + 1e-6) + 1e-12
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise HypothesisError(
            f"integral hypothesis fails at t={t[i]}: {phi[i]} > {bound[i]}"
        )


def weak_lp_bound(mass_positive: float, kappa: float, p: float, q: float) -> float:
    """(1 - q/p)^(-1/q) * mass^(1/q - 1/p) * kappa."""
    if not 1.0 <= q < p < math.inf:
        raise ValueError("need 1 <= q < p < infinity")
    return (1.0 - q / p) ** (-1.0 / q) * mass_positive ** (1.0 / q - 1.0 / p) * kappa


def weak_lp_kappa_atomic(weights, values, p: float) -> float:
    """kappa = sup_d d * phi({f >= d})^(1/p), exact for atomic measures.

    The superlevel mass is constant between consecutive distinct values,
    so the supremum is attained at the values themselves.
    """
    w = np.asarray(weights, dtype=float)
    f = np.asarray(values, dtype=float)
    pos = f > 0
    if not np.any(pos):
        return 0.0
    vals = np.unique(f[pos])
    masses = np.array([np.sum(w[f >= d]) for d in vals])
    return float(np.max(vals * masses ** (1.0 / p)))


def lebesgue_seminorm(weights, values, p: float) -> float:
    """phi_(p)(f) for an atomic measure (weighted essential sup at p=inf)."""
    w = np.asarray(weights, dtype=float)
    f = np.abs(np.asarray(values, dtype=float))
    if p == math.inf:
        carried = f[w > 0]
        return float(np.max(carried)) if len(carried) else 0.0
    if p < 1:
        raise ValueError("need p >= 1")
    return float(np.sum(w * f**p) ** (1.0 / p))


def check_weak_lp_atomic(weights, values, p: float, q: float,
                         rel_tol: float = 1e-9) -> tuple[float, float]:
    """(lhs, rhs) of the weak-L^p embedding on an atomic instance."""
    w = np.asarray(weights, dtype=float)
    f = np.asarray(values, dtype=float)
    if np.any(f < 0):
        raise ValueError("f must be nonnegative")
    kappa = weak_lp_kappa_atomic(w, f, p)
    mass_pos = float(np.sum(w[f > 0]))
    lhs = lebesgue_seminorm(w, f, q)
    rhs = weak_lp_bound(mass_pos, kappa, p, q) if mass_pos > 0 else 0.0
    return lhs, rhs


def superlevel_integral(weights, values, p: float) -> tuple[float, float]:
    """(phi_(p)(f), integral of phi(E(y))^(1/p) dy), exact for atoms.

    phi(E(y)) with E(y) = {f > y} is a right-continuous step function with
    jumps at the distinct values of f, so the layer-cake majorant is a
    finite sum.  At p = 1 the two sides agree identically (Fubini).
    """
    w = np.asarray(weights, dtype=float)
    f = np.asarray(values, dtype=float)
    if np.any(f < 0):
        raise ValueError("f must be nonnegative")
    lhs = lebesgue_seminorm(w, f, p)
    vals = np.unique(f)
    levels = np.concatenate([[0.0], vals]) if (len(vals) == 0 or vals[0] > 0) else vals
    rhs = 0.0
    for y0, y1 in zip(levels[:-1], levels[1:]):
        mass = float(np.sum(w[f > y0]))
        if p == math.inf:
            rhs += (y1 - y0) * (1.0 if mass > 0 else 0.0)
        else:
            rhs += (y1 - y0) * mass ** (1.0 / p)
    return lhs, rhs
