"""Seeded random admissible instances for the lemma-level checkers.

Each generator constructs instances that provably satisfy the lemma's
hypotheses (constructive slack, not post-hoc filtering), so any checker
violation falsifies the lemma numerically rather than flagging a bad
instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lemmas import (check_iteration, check_weak_lp_atomic, calculus_find_t,
                     superlevel_integral)


@dataclass
class SuiteResult:
    name: str
    checked: int
    violations: int
    worst_margin: float  # most adverse lhs/rhs ratio observed (<= 1 when clean)

    @property
    def passed(self) -> bool:
        return self.violations == 0


def iteration_suite(count: int, seed: int, grid_points: int = 64) -> SuiteResult:
    """Random instances built under the extremal profile of the bound.

    a*(d) = (kappa d^-mu (1/lam)^(mu^2/(1-mu)))^(1/(1-mu)) satisfies the
    hypothesis with equality; multiplying by theta with
    theta(d) <= theta(lam d)^mu preserves it, so instances are generated as
    theta-damped extremals along the grid chains.
    """
    rng = np.random.default_rng(seed)
    violations = 0
    for _ in range(count):
        ratio = 2.0 ** (1.0 / 4.0)
        d = 1e-2 * ratio ** np.arange(grid_points)
        shift = int(rng.integers(1, 4))
        lam = ratio ** -shift
        mu = float(rng.uniform(0.1, 0.9))
        kappa = float(rng.uniform(0.1, 10.0))
        big_lambda = (1.0 / lam) ** (mu * mu / (1.0 - mu))
        a_star = (kappa * d**-mu * big_lambda) ** (1.0 / (1.0 - mu))
        theta = np.empty(grid_points)
        theta[:shift] = rng.uniform(0.0, 1.0, shift)
        for j in range(shift, grid_points):
            theta[j] = theta[j - shift] ** mu * rng.uniform(0.0, 1.0)
        a = theta * a_star
        if not check_iteration(d, a, kappa, lam, mu):
            violations += 1
    # the two degenerate anchor cases
    d = 1e-2 * (2.0 ** (1.0 / 4.0)) ** np.arange(grid_points)
    if not check_iteration(d, np.zeros(grid_points), 1.0, 0.5 ** (1.0 / 1.0), 0.5):
        violations += 1
    return SuiteResult("iteration", count + 1, violations, 1.0)


def _calculus_instance(rng: np.random.Generator, grid: int = 32):
    """(f, g, s, m) with all hypotheses holding by construction.

    f is piecewise linear and nondecreasing with t^-m f(t) descending from
    >= 3/4 at s to exactly 1/3 at r (log-spaced knots so the monotonicity
    budget per step is uniform); g is the constant-slope envelope
    (1 + sigma) * Dmax * u^m, which makes the integral hypothesis exact
    under trapezoid quadrature.
    """
    m = float(rng.uniform(0.5, 3.0))
    s = float(rng.uniform(0.1, 2.0))
    phi0 = float(rng.uniform(0.75, 1.2))
    rho = (3.0 * phi0 * float(rng.uniform(1.2, 2.5))) ** (1.0 / m)
    r = s * rho
    knots = s * rho ** (np.arange(grid + 1) / grid)
    # allocate the total log-descent D across steps, capped per step by the
    # nondecreasing-f budget m*log(rho)/grid
    descent_total = math.log(3.0 * phi0)
    cap = m * math.log(rho) / grid
    raw = rng.uniform(0.2, 1.0, grid) * cap
    drops = raw * descent_total / float(np.sum(raw))
    for _ in range(8):
        over = drops > cap
        if not np.any(over):
            break
        excess = float(np.sum(drops[over] - cap))
        drops[over] = cap
        room = cap - drops
        slack = float(np.sum(room))
        drops += room * (excess / slack)
    phi = phi0 * np.exp(-np.concatenate([[0.0], np.cumsum(drops)]))
    phi[-1] = 1.0 / 3.0
    f_knots = phi * knots**m

    def f(t):
        if t >= r:
            return float(f_knots[-1])
        return float(np.interp(t, knots, f_knots))

    slopes = np.diff(phi) / np.diff(knots)
    d_max = float(np.max(-slopes))
    sigma = float(rng.uniform(0.1, 0.5))
    envelope = (1.0 + sigma) * d_max

    def g(u):
        return envelope * u**m

    return f, g, s, m


def calculus_suite(count: int, seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    failures = 0
    worst_refinement = 0
    for _ in range(count):
        f, g, s, m = _calculus_instance(rng)
        t, refinements = calculus_find_t(f, g, s, m)
        worst_refinement = max(worst_refinement, refinements)
        if t is None or refinements > 2:
            failures += 1
            continue
        if f(5.0 * t) > 5.0**m * _locate_r_for_check(f, s, m) * g(t) * (1.0 + 1e-9):
            failures += 1
    return SuiteResult("calculus", count, failures, float(worst_refinement))


def _locate_r_for_check(f, s, m):
    from .lemmas import _locate_r

    return _locate_r(f, s, m)


def weak_lp_suite(count: int, seed: int, atoms: int = 40) -> SuiteResult:
    rng = np.random.default_rng(seed)
    violations = 0
    worst = 0.0
    for _ in range(count):
        k = int(rng.integers(1, atoms + 1))
        w = rng.uniform(1e-3, 1.0, k)
        f = rng.uniform(0.0, 5.0, k)
        f[rng.uniform(size=k) < 0.25] = 0.0
        p = float(rng.uniform(1.1, 4.0))
        q = float(rng.uniform(1.0, p - 0.05))
        lhs, rhs = check_weak_lp_atomic(w, f, p, q)
        ratio = 0.0 if lhs == rhs == 0.0 else lhs / rhs
        worst = max(worst, ratio)
        if lhs > rhs * (1.0 + 1e-9):
            violations += 1
    return SuiteResult("weak-lp", count, violations, worst)


def superlevel_suite(count: int, seed: int, atoms: int = 60) -> SuiteResult:
    rng = np.random.default_rng(seed)
    violations = 0
    worst = 0.0
    p_choices = [1.0, 1.5, 2.0, 3.0, math.inf]
    for i in range(count):
        k = int(rng.integers(1, atoms + 1))
        w = rng.uniform(1e-3, 1.0, k)
        f = rng.uniform(0.0, 3.0, k)
        f[rng.uniform(size=k) < 0.2] = 0.0
        p = p_choices[i % len(p_choices)]
        lhs, rhs = superlevel_integral(w, f, p)
        ratio = 0.0 if lhs == rhs == 0.0 else (math.inf if rhs == 0.0 else lhs / rhs)
        worst = max(worst, ratio)
        if lhs > rhs * (1.0 + 1e-9):
            violations += 1
        if p == 1.0 and abs(lhs - rhs) > 1e-9 * max(1.0, lhs):
            violations += 1
    return SuiteResult("superlevel", count, violations, worst)


def run_lemma_suites(count: int, seed: int) -> list[SuiteResult]:
    return [
        iteration_suite(count, seed),
        calculus_suite(count, seed + 1),
        weak_lp_suite(count, seed + 2),
        superlevel_suite(count, seed + 3),
    ]
