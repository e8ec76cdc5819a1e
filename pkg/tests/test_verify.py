import math

import numpy as np
import pytest

from varikit.families import FlatDisc, ProductSlab, SphereShell
from varikit.fields import default_dictionary, radial_bump, radial_cap
from varikit.geometry import coordinate_subspace, gamma_upper
from varikit.maximal import MaximalParams, MedianParams
from varikit.verify import (SupportError, VerificationReport,
                            decomposition_check, gamma_lower_bound,
                            verify_ball_iso, verify_isoperimetric,
                            verify_poincare, verify_size_iso,
                            verify_sobolev_avg)


def test_report_ratio_edge_cases():
    vacuous = VerificationReport("x", 0.0, 0.0, params={})
    assert vacuous.ratio == 0.0 and vacuous.passed
    degenerate = VerificationReport("x", 1.0, 0.0, params={})
    assert math.isinf(degenerate.ratio) and not degenerate.passed
    near = VerificationReport("x", 1.0, 1.0 - 1e-12, params={})
    assert near.passed  # inside the reporting tolerance
    fail = VerificationReport("x", 1.01, 1.0, params={})
    assert not fail.passed


def test_ball_iso_equalities():
    # Unit circle in the closed unit ball: lhs = 2 pi / (alpha(1) * 1) = pi,
    # rhs = gamma_upper(1) * ||delta V|| = pi: equality at m = 1.
    report = verify_ball_iso(SphereShell(1, 2, 1.0), np.zeros(2), 1.0)
    assert report.ratio == pytest.approx(1.0, abs=1e-12)
    assert report.passed
    # Unit segment: ||V|| = 2, ||delta V|| = 2 endpoints: equality again.
    seg = verify_ball_iso(FlatDisc(coordinate_subspace(2, [0]), 1.0),
                          np.zeros(2), 1.0)
    assert seg.ratio == pytest.approx(1.0, abs=1e-12)


def test_implied_gamma_bound_disc():
    disc = FlatDisc(coordinate_subspace(3, [0, 1]), 1.0)
    report = verify_ball_iso(disc, np.zeros(3), 1.0)
    implied = report.params["impliedGammaLowerBound"]
    assert implied == pytest.approx(0.5 / math.sqrt(math.pi), abs=1e-12)
    assert implied <= gamma_upper(2)


def test_ball_iso_rejects_support_leak():
    # The unit circle is not inside the ball of radius 0.5.
    with pytest.raises(SupportError):
        verify_ball_iso(SphereShell(1, 2, 1.0), np.zeros(2), 0.5)


def test_isoperimetric_scale_invariance():
    # Dilating the varifold and all length scales leaves the ratio fixed.
    params = MaximalParams(s_min=0.1, s_max=8.0)
    base = SphereShell(2, 3, 1.0).sample(0.1)
    r1 = verify_isoperimetric(base, 0.5, params)
    scaled_params = MaximalParams(s_min=0.2, s_max=16.0)
    # Sampling the dilated sphere at 2h reproduces the base sample scaled by
    # 2 exactly (node counts depend only on the ratio radius/h).
    dilated = SphereShell(2, 3, 2.0).sample(0.2)
    r2 = verify_isoperimetric(dilated, 0.5, scaled_params)
    # m = 2: superlevel mass scales by lam^2, so mass^(1/2) doubles; the
    # first-variation mass (m/r) * ||V|| doubles too -> ratio invariant.
    assert r2.lhs == pytest.approx(2.0 * r1.lhs, rel=1e-9)
    assert r2.rhs == pytest.approx(2.0 * r1.rhs, rel=1e-9)
    assert r2.ratio == pytest.approx(r1.ratio, rel=1e-9)


def test_isoperimetric_dictionary_source_is_conservative():
    v = SphereShell(1, 2, 1.0).sample(0.02)
    params = MaximalParams(s_min=0.1, s_max=8.0)
    analytic = verify_isoperimetric(v, 1.0, params)
    dictionary = verify_isoperimetric(v, 1.0, params,
                                      delta_source="dictionaryLowerBound",
                                      dictionary=default_dictionary(2))
    assert "rhs:dictionaryLowerBound" in dictionary.conservative
    assert dictionary.rhs <= analytic.rhs * (1.0 + 1e-9)
    with pytest.raises(ValueError):
        verify_isoperimetric(v, -1.0, params)


def test_size_iso_reports():
    reports = verify_size_iso(SphereShell(2, 3, 1.0), 1.0, name="size")
    assert [r.name for r in reports] == ["size", "size/postscript"]
    assert all(r.passed for r in reports)
    empty = verify_size_iso(SphereShell(2, 3, 1.0), 2.0, name="e")
    assert empty[0].lhs == 0.0  # density 1 < 2 everywhere: empty superlevel


def test_sobolev_avg_beta_free_flag():
    v = FlatDisc(coordinate_subspace(3, [0, 1]), 1.0).sample(0.05)
    f = radial_cap(np.zeros(3), 0.2, 0.45)
    med = MedianParams(lam=0.5, radius_field=0.5)
    free = verify_sobolev_avg(v, f, med, d=0.1, beta_n=None)
    assert "rhs:betaFreeLowerBound" in free.conservative
    supplied = verify_sobolev_avg(v, f, med, d=0.1, beta_n=2.0)
    assert supplied.rhs >= free.rhs  # beta >= 1 only loosens the bound
    assert free.passed and supplied.passed


def test_poincare_support_condition():
    # The measure must be supported strictly inside the ball U(a, r); a
    # circle of radius 1.5 reaches outside U(0, 1).
    f = radial_bump(np.zeros(2), 2.0)
    with pytest.raises(SupportError):
        verify_poincare(SphereShell(1, 2, 1.5), np.zeros(2), 1.0, f, h=0.01)
    # Touching the boundary sphere also violates the open-ball hypothesis.
    with pytest.raises(SupportError):
        verify_poincare(SphereShell(1, 2, 1.0), np.zeros(2), 1.0, f, h=0.01)
    ok = verify_poincare(SphereShell(1, 2, 0.5), np.zeros(2), 1.0, f, h=0.01)
    assert ok.passed


def test_gamma_lower_bound_guards_upper_constant():
    good = verify_ball_iso(SphereShell(1, 2, 1.0), np.zeros(2), 1.0)
    bounds = gamma_lower_bound([good])
    assert bounds[1] <= 0.5 * (1 + 1e-9)
    fake = verify_ball_iso(SphereShell(1, 2, 1.0), np.zeros(2), 1.0)
    fake.params = dict(fake.params, impliedGammaLowerBound=0.75)
    with pytest.raises(AssertionError):
        gamma_lower_bound([fake])
    with pytest.raises(ValueError):
        gamma_lower_bound([])


def test_decomposition_window_guard():
    slab = ProductSlab(coordinate_subspace(2, [0]), [-1.0, -1.0], [1.0, 1.0],
                       unbounded=True)
    from varikit.fields import coordinate_profile
    f = coordinate_profile(2, 1, 0.8)
    with pytest.raises(ValueError):
        decomposition_check(slab, f, [0.5], default_dictionary(2), h=0.1)
    clipped = ProductSlab(coordinate_subspace(2, [0]), [-1.0, -1.0],
                          [1.0, 1.0])
    with pytest.raises(ValueError):
        decomposition_check(clipped, f, [0.5], [], h=0.1)
