import math

import numpy as np
import pytest

from varikit.lemmas import (HypothesisError, calculus_find_t, check_iteration,
                            check_weak_lp_atomic, iteration_bound,
                            lebesgue_seminorm, superlevel_integral,
                            weak_lp_bound, weak_lp_kappa_atomic)


def _extremal_profile(kappa, lam, mu, d):
    """The profile that satisfies the iteration hypothesis with equality."""
    exponent = mu * mu / (1.0 - mu)
    return (kappa * d ** (-mu) * (1.0 / lam) ** exponent) ** (1.0 / (1.0 - mu))


def test_iteration_extremal_profile_passes():
    kappa, lam, mu = 2.0, 0.5, 0.6
    d = 0.01 * (2.0**0.25) ** np.arange(81)  # lam = ratio^-4
    a = _extremal_profile(kappa, lam, mu, d)
    assert check_iteration(d, a, kappa, lam, mu)
    # The profile meets the conclusion a^(1-mu) <= bound with equality.
    assert np.allclose(a ** (1.0 - mu), iteration_bound(kappa, lam, mu, d),
                       rtol=1e-9)


def test_iteration_rejects_hypothesis_violation():
    kappa, lam, mu = 1.0, 0.5, 0.5
    d = np.geomspace(0.1, 10.0, 41)  # ratio 10^(1/20)... lam mismatch
    with pytest.raises(ValueError):
        check_iteration(d, np.ones_like(d), kappa, lam, mu)
    d = np.geomspace(0.125, 8.0, 19)  # ratio 2^(1/3), lam = ratio^-3
    a = 10.0 * _extremal_profile(kappa, lam, mu, d)  # violates the hypothesis
    with pytest.raises(HypothesisError):
        check_iteration(d, a, kappa, lam, mu)


def test_iteration_parameter_domain():
    d = np.geomspace(0.25, 4.0, 9)
    for bad in ({"kappa": -1.0}, {"lam": 1.5}, {"mu": 0.0}, {"mu": 1.0}):
        kwargs = {"kappa": 1.0, "lam": 0.5, "mu": 0.5, **bad}
        with pytest.raises(ValueError):
            check_iteration(d, np.ones_like(d), **kwargs)


def test_calculus_witness_on_explicit_instance():
    # f(u) = min(u, 1), m = 1, s = 1: phi(t) = 1/t, so r = 3.  A constant
    # g = 0.7 satisfies 1/t - 1/3 <= 0.7 * ln(3/t) on [1, 3], and every
    # grid point is a witness because f(5t) = 1 <= 5 * 3 * 0.7.
    f = lambda u: min(u, 1.0)
    g = lambda u: 0.7
    t, refinements = calculus_find_t(f, g, 1.0, 1.0)
    assert t == pytest.approx(1.0) and refinements == 0


def test_calculus_hypothesis_violations_raise():
    f = lambda u: min(u, 1.0)
    with pytest.raises(HypothesisError):
        calculus_find_t(f, lambda u: 1e-9, 1.0, 1.0)  # integral hypothesis
    with pytest.raises(HypothesisError):
        calculus_find_t(lambda u: 0.1 * u, lambda u: 1.0, 1.0, 1.0)  # phi(s) < 3/4
    with pytest.raises(HypothesisError):
        calculus_find_t(lambda u: u, lambda u: 1.0, 1.0, 1.0)  # r not finite
    with pytest.raises(ValueError):
        calculus_find_t(f, lambda u: 1.0, -1.0, 1.0)


def test_weak_lp_bound_formula_and_domain():
    # (1 - q/p)^(-1/q) * mass^(1/q - 1/p) * kappa at p=2, q=1: 2 * kappa.
    assert weak_lp_bound(1.0, 3.0, 2.0, 1.0) == pytest.approx(6.0)
    assert weak_lp_bound(4.0, 1.0, 2.0, 1.0) == pytest.approx(2.0 * 2.0)
    for p, q in ((1.0, 1.0), (2.0, 2.0), (2.0, 3.0), (math.inf, 1.0)):
        with pytest.raises(ValueError):
            weak_lp_bound(1.0, 1.0, p, q)


def test_weak_lp_atomic_single_atom():
    # One atom (w=1, f=c): seminorms at every exponent equal c, and the
    # embedding constant 2 leaves slack.
    lhs, rhs = check_weak_lp_atomic([1.0], [5.0], 2.0, 1.0)
    assert lhs == pytest.approx(5.0)
    assert rhs == pytest.approx(10.0)
    assert weak_lp_kappa_atomic([1.0], [5.0], 2.0) == pytest.approx(5.0)


def test_lebesgue_seminorm_positivity_set():
    # Zero-weight atoms are outside the measure; ess-sup ignores them.
    w = [1.0, 0.0]
    f = [1.0, 100.0]
    assert lebesgue_seminorm(w, f, math.inf) == 1.0
    assert lebesgue_seminorm(w, f, 2.0) == pytest.approx(1.0)


def test_superlevel_integral_p1_is_fubini():
    rng = np.random.default_rng(5)
    w = rng.uniform(0.1, 1.0, 30)
    f = rng.uniform(0.0, 3.0, 30)
    lhs, rhs = superlevel_integral(w, f, 1.0)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_superlevel_integral_two_atoms_by_hand():
    # Atoms (w=1, f=1) and (w=3, f=2) at p=2: the seminorm is sqrt(13) and
    # the superlevel integral is 1 * sqrt(4) + 1 * sqrt(3).
    lhs, rhs = superlevel_integral([1.0, 3.0], [1.0, 2.0], 2.0)
    assert lhs == pytest.approx(math.sqrt(13.0))
    assert rhs == pytest.approx(2.0 + math.sqrt(3.0))
    assert lhs <= rhs
    with pytest.raises(ValueError):
        superlevel_integral([1.0], [-1.0], 2.0)
