"""Verification experiments for the isoperimetric/Sobolev/Poincare bounds.

Every check builds a VerificationReport whose left side is measured (or
exact) and whose right side uses the explicit constant upper bound; any
substitution of a bound for an exact quantity is flagged and can only err
toward FAIL.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .families import (AnalyticFamily, FlatDisc, PlaneBundle, ProductSlab,
                       SphereShell, UnsupportedFamilyError)
from .fields import ScalarTestFunction, TestVectorField, default_dictionary
from .geometry import gamma_upper, unit_ball_volume
from .maximal import (MaximalParams, MedianParams, _geq,
                      lower_density_region, median_g, superlevel_mass)
from .varifold import DiscreteVarifold
from .variation import (first_variation, integral_against_delta,
                        integral_weak_gradient, total_variation_lower_bound)

REPORT_TOLERANCE = 1e-9


class SupportError(ValueError):
    """The measure's support violates a stated containment hypothesis."""


class DeltaSourceError(ValueError):
    """The requested first-variation source is unavailable for this input."""


@dataclass
class VerificationReport:
    name: str
    lhs: float
    rhs: float
    params: dict
    conservative: tuple[str, ...] = ()
    tolerance: float = REPORT_TOLERANCE
    ratio: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        self.lhs, self.rhs = float(self.lhs), float(self.rhs)
        if self.lhs == 0.0 and self.rhs == 0.0:
            self.ratio = 0.0
        elif self.rhs == 0.0:
            self.ratio = math.inf
        else:
            self.ratio = self.lhs / self.rhs
        self.passed = bool(self.ratio <= 1.0 + self.tolerance)


def _power(base: float, exponent: float) -> float:
    """base**exponent with the 0**0 = 0 convention of the theorems."""
    if base == 0.0:
        return 0.0
    return base**exponent


def _delta_mass(v: DiscreteVarifold, source: str, dictionary=None) -> tuple[float, tuple]:
    """Total first-variation mass and the conservative flags it incurs."""
    if source == "analytic":
        if v.meta is None:
            raise DeltaSourceError("analytic first variation needs a family-backed sample")
        family, _ = v.meta
        return float(family.delta_total_mass), ()
    if source == "dictionaryLowerBound":
        if dictionary is None:
            dictionary = default_dictionary(v.n)
        return total_variation_lower_bound(v, dictionary), ("rhs:dictionaryLowerBound",)
    raise DeltaSourceError(f"unknown first-variation source {source!r}")


def _delta_integral(v: DiscreteVarifold, f: ScalarTestFunction,
                    dictionary=None) -> tuple[float, tuple]:
    """integral of f d||delta V||: exact via family data, else a lower bound.

    The fallback evaluates delta V on products f*theta over the dictionary;
    since f >= 0 and |theta| <= 1, each |delta V(f theta)| is a lower bound
    for the integral, which shrinks the right side (errs toward FAIL).
    """
    if v.meta is not None:
        family, h = v.meta
        try:
            return integral_against_delta(family, f, h), ()
        except UnsupportedFamilyError:
            pass
    if dictionary is None:
        dictionary = default_dictionary(v.n)
    best = 0.0
    for theta in dictionary:
        prod = _scalar_times_field(f, theta)
        best = max(best, abs(first_variation(v, prod)))
    return best, ("rhs:deltaDictionaryLowerBound",)


def _scalar_times_field(f: ScalarTestFunction, theta: TestVectorField) -> TestVectorField:
    def value(x):
        return f(x) * theta(x)

    def jac(x):
        return np.outer(theta(x), f.gradient(x)) + f(x) * theta.d(x)

    return TestVectorField(value, jac, theta.center, theta.support_radius,
                           theta.sup_norm, name=f"{f.name}*{theta.name}")


def _support_radius(positions: np.ndarray, a) -> float:
    if len(positions) == 0:
        return 0.0
    return float(np.max(np.linalg.norm(positions - np.asarray(a, dtype=float), axis=1)))


def verify_isoperimetric(v: DiscreteVarifold, d: float, params: MaximalParams,
                         delta_source: str = "analytic", dictionary=None,
                         name: str = "isoperimetric") -> VerificationReport:
    """mass{M >= d}^(1-1/m) against Gamma * d^(-1/m) * ||delta V||."""
    if d <= 0:
        raise ValueError("threshold d must be positive")
    m = v.m
    mass = superlevel_mass(v, d, params)
    lhs = _power(mass, 1.0 - 1.0 / m)
    delta, flags = _delta_mass(v, delta_source, dictionary)
    rhs = gamma_upper(m) * d ** (-1.0 / m) * delta
    h = v.meta[1] if v.meta is not None else None
    return VerificationReport(
        name, lhs, rhs,
        params={"m": m, "n": v.n, "d": d, "h": h, "sMin": params.s_min,
                "deltaSource": delta_source, "deltaTotal": delta,
                "superlevelMass": mass, "constant": "explicitUpperBound"},
        conservative=flags,
    )


def verify_ball_iso(target, a, r: float, h: float | None = None,
                    delta_source: str = "analytic", dictionary=None,
                    name: str = "ball-iso") -> VerificationReport:
    """alpha(m)^(-1/m) r^-1 ||V|| against gamma-upper * ||delta V||."""
    if r <= 0:
        raise ValueError("ball radius must be positive")
    flags: tuple = ()
    if isinstance(target, AnalyticFamily):
        mass = float(target.total_mass)
        delta = float(target.delta_total_mass)
        m, n = target.m, target.n
        audit = target.sample(h if h is not None else r / 20.0)
        spread = _support_radius(audit.positions, a)
    else:
        v: DiscreteVarifold = target
        mass = v.total_weight
        delta, flags = _delta_mass(v, delta_source, dictionary)
        m, n = v.m, v.n
        spread = _support_radius(v.positions, a)
    if spread > r * (1.0 + 1e-9):
        raise SupportError(f"support reaches distance {spread} > r = {r} from the center")
    lhs = unit_ball_volume(m) ** (-1.0 / m) / r * mass
    rhs = gamma_upper(m) * delta
    implied = 0.0 if delta == 0.0 and lhs == 0.0 else (
        math.inf if delta == 0.0 else lhs / delta)
    return VerificationReport(
        name, lhs, rhs,
        params={"m": m, "n": n, "r": r, "mass": mass, "deltaTotal": delta,
                "impliedGammaLowerBound": implied, "constant": "explicitUpperBound"},
        conservative=flags,
    )


def _hausdorff_superlevel(family: AnalyticFamily, d: float) -> float:
    """m-dimensional measure of {density >= d}, exact per family geometry."""
    if isinstance(family, SphereShell):
        area = (family.m + 1) * unit_ball_volume(family.m + 1) * family.radius**family.m
        return area if _geq(family.multiplicity, d) else 0.0
    if isinstance(family, FlatDisc):
        area = unit_ball_volume(family.m) * family.radius**family.m
        return area if _geq(family.multiplicity, d) else 0.0
    if isinstance(family, PlaneBundle):
        if family.clip is None:
            raise UnsupportedFamilyError("unclipped bundles have infinite mass")
        area = family.total_mass / family.weight
        return area if _geq(family.weight, d) else 0.0
    raise UnsupportedFamilyError(
        f"{type(family).__name__} has no finite-density carrier of finite measure"
    )


def verify_size_iso(family: AnalyticFamily, d: float,
                    name: str = "size-iso") -> list[VerificationReport]:
    """Density-superlevel size bound, plus the total-mass postscript."""
    if family.m < 2:
        raise ValueError("the size bound requires m >= 2")
    if d <= 0:
        raise ValueError("threshold d must be positive")
    m = family.m
    h_level = _hausdorff_superlevel(family, d)
    delta = float(family.delta_total_mass)
    principal = VerificationReport(
        name, d * _power(h_level, 1.0 - 1.0 / m), gamma_upper(m) * delta,
        params={"m": m, "n": family.n, "d": d, "hausdorffSuperlevel": h_level,
                "deltaTotal": delta, "constant": "explicitUpperBound"},
    )
    carrier = _hausdorff_superlevel(family, np.finfo(float).tiny)
    postscript = VerificationReport(
        name + "/postscript", float(family.total_mass),
        m * gamma_upper(m) * _power(carrier, 1.0 / m) * delta,
        params={"m": m, "n": family.n, "hausdorffCarrier": carrier,
                "deltaTotal": delta, "constant": "explicitUpperBound"},
    )
    return [principal, postscript]


def _beta_norm(weights: np.ndarray, values: np.ndarray, m: int) -> float:
    """(sum w v^beta)^(1/beta) with beta = m/(m-1); weighted sup at m = 1."""
    from .lemmas import lebesgue_seminorm

    beta = math.inf if m == 1 else m / (m - 1.0)
    return lebesgue_seminorm(weights, values, beta)


def verify_sobolev_avg(v: DiscreteVarifold, f: ScalarTestFunction,
                       median_params: MedianParams, d: float,
                       maximal_params: MaximalParams | None = None,
                       beta_n: float | None = None, dictionary=None,
                       name: str = "sobolev-avg") -> VerificationReport:
    """Averaged Sobolev bound: beta-norm of the median function over A."""
    if d <= 0:
        raise ValueError("threshold d must be positive")
    m = v.m
    region = lower_density_region(v, d, mode="ball_ratio",
                                  radius_field=median_params.radius_field)
    g_vals = np.array([
        median_g(v, f, v.positions[i], median_params) for i in region
    ]) if len(region) else np.zeros(0)
    lhs = _beta_norm(v.weights[region], g_vals, m)
    delta_f, flags = _delta_integral(v, f, dictionary)
    grad_term = integral_weak_gradient(v, f)
    if beta_n is None:
        beta_factor, flags = 1.0, flags + (("rhs:betaFreeLowerBound",) if m > 1 else ())
    else:
        if beta_n < 1.0:
            raise ValueError("the covering constant is always >= 1")
        beta_factor = beta_n ** (1.0 - 1.0 / m)
    gamma_factor = (1.0 - median_params.lam) ** -1.0 * beta_factor \
        * gamma_upper(m) * d ** (-1.0 / m)
    rhs = gamma_factor * (delta_f + grad_term)
    h = v.meta[1] if v.meta is not None else None
    return VerificationReport(
        name, lhs, rhs,
        params={"m": m, "n": v.n, "d": d, "lambda": median_params.lam,
                "h": h, "betaN": beta_n, "regionMass": float(np.sum(v.weights[region])),
                "deltaIntegral": delta_f, "gradientIntegral": grad_term,
                "constant": "explicitUpperBound"},
        conservative=flags,
    )


def verify_sobolev_rect(family: AnalyticFamily, f: ScalarTestFunction, d: float,
                        h: float, dictionary=None,
                        name: str = "sobolev-rect") -> VerificationReport:
    """Rectifiable-part Sobolev bound on the exact density superlevel set."""
    if d <= 0:
        raise ValueError("threshold d must be positive")
    v = family.sample(h)
    m = v.m
    region = lower_density_region(v, d, mode="density", family=family)
    f_vals = np.array([f(x) for x in v.positions[region]]) if len(region) else np.zeros(0)
    lhs = _beta_norm(v.weights[region], f_vals, m)
    delta_f, flags = _delta_integral(v, f, dictionary)
    grad_term = integral_weak_gradient(v, f)
    rhs = gamma_upper(m) * d ** (-1.0 / m) * (delta_f + grad_term)
    return VerificationReport(
        name, lhs, rhs,
        params={"m": m, "n": v.n, "d": d, "h": h,
                "regionMass": float(np.sum(v.weights[region])),
                "deltaIntegral": delta_f, "gradientIntegral": grad_term,
                "constant": "explicitUpperBound"},
        conservative=flags,
    )


def verify_poincare(target, a, r: float, f: ScalarTestFunction,
                    h: float | None = None, dictionary=None,
                    name: str = "poincare") -> VerificationReport:
    """Zero-boundary-value Poincare bound in the open ball U(a, r)."""
    if r <= 0:
        raise ValueError("ball radius must be positive")
    if isinstance(target, AnalyticFamily):
        if h is None:
            raise ValueError("a family input needs a sampling resolution h")
        v = target.sample(h)
    else:
        v = target
    spread = _support_radius(v.positions, a)
    if spread >= r * (1.0 - 1e-12):
        raise SupportError(f"support reaches distance {spread}, not inside U(a, {r})")
    m = v.m
    f_vals = np.array([f(x) for x in v.positions]) if len(v) else np.zeros(0)
    lhs = unit_ball_volume(m) ** (-1.0 / m) / r * float(np.sum(v.weights * f_vals))
    delta_f, flags = _delta_integral(v, f, dictionary)
    grad_term = integral_weak_gradient(v, f)
    rhs = gamma_upper(m) * (delta_f + grad_term)
    return VerificationReport(
        name, lhs, rhs,
        params={"m": m, "n": v.n, "r": r, "deltaIntegral": delta_f,
                "gradientIntegral": grad_term, "constant": "explicitUpperBound"},
        conservative=flags,
    )


def gamma_lower_bound(reports) -> dict[int, float]:
    """Best empirical lower bound for the isoperimetric constant, per m.

    Ball reports carry their implied bound directly; superlevel reports are
    rearranged as d^(1/m) * lhs / ||delta V||.  Any bound exceeding the
    proven upper constant would falsify the theorems and raises instead.
    """
    reports = list(reports)
    if not reports:
        raise ValueError("need a nonempty report suite")
    best: dict[int, float] = {}
    for rep in reports:
        m = int(rep.params["m"])
        delta = float(rep.params["deltaTotal"])
        if "impliedGammaLowerBound" in rep.params:
            implied = float(rep.params["impliedGammaLowerBound"])
        else:
            d = float(rep.params["d"])
            implied = math.inf if delta == 0.0 and rep.lhs > 0.0 else (
                0.0 if delta == 0.0 else d ** (1.0 / m) * rep.lhs / delta)
        best[m] = max(best.get(m, 0.0), implied)
    for m, value in best.items():
        if value > gamma_upper(m) * (1.0 + 1e-9):
            raise AssertionError(
                f"implied bound {value} exceeds the proven constant {gamma_upper(m)} at m={m}"
            )
    return best


def decomposition_check(slab: ProductSlab, f: ScalarTestFunction, y_grid,
                        dictionary, h: float, tol: float = 1e-3,
                        name: str = "decomposition") -> VerificationReport:
    """Vanishing first variation and distributional boundaries for a slab.

    Checks Df restricted to the plane vanishes on every atom, |delta V(theta)|
    is negligible for every dictionary field, and the boundary pairing of
    every superlevel set E(y) is negligible: the constellation that rules
    out any decomposition into components with locally finite boundary.
    """
    from .variation import distributional_boundary_eval

    if not slab.unbounded:
        raise ValueError("the vanishing-boundary construction needs an unclipped slab")
    y_grid = [float(y) for y in y_grid]
    dictionary = list(dictionary)
    lo = np.asarray(slab.lo, dtype=float)
    hi = np.asarray(slab.hi, dtype=float)
    for theta in dictionary:
        if theta.support_radius is None:
            raise ValueError("every dictionary field needs a finite support radius")
        c = np.asarray(theta.center, dtype=float)
        if np.any(c - theta.support_radius < lo) or np.any(c + theta.support_radius > hi):
            raise ValueError(
                "field support must lie inside the sampled window, otherwise "
                "the quadrature picks up flux at the window edge"
            )
    v = slab.sample(h)
    scale = v.total_weight
    tangential = max(
        (float(np.linalg.norm(P @ f.gradient(x))) for x, P in zip(v.positions, v.planes)),
        default=0.0,
    )
    if tangential > 1e-9:
        raise ValueError("f must be constant along the slab's plane directions")
    worst = 0.0
    for theta in dictionary:
        worst = max(worst, abs(first_variation(v, theta)))
        for y in y_grid:
            val = distributional_boundary_eval(
                v, lambda x, yy=float(y): f(x) > yy, theta)
            worst = max(worst, abs(val))
    return VerificationReport(
        name, worst, tol * scale,
        params={"m": v.m, "n": v.n, "h": h, "yGrid": len(y_grid),
                "fields": len(dictionary), "massScale": scale},
    )
