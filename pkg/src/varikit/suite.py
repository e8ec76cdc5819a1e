"""The shipped verification suite: every theorem, multiple configurations.

Covering-constant-free runs use the conservative substitute factor 1 (the
true covering constant of any dimension is at least 1, so this only
shrinks the right side and can only err toward FAIL).
"""

from __future__ import annotations

import math

import numpy as np

from .blowup import BlowupSeries, blowup_series
from .families import FlatDisc, PlaneBundle, ProductSlab, SphereShell
from .fields import default_dictionary, radial_bump, radial_cap
from .geometry import coordinate_subspace
from .maximal import MaximalParams, MedianParams
from .verify import (VerificationReport, decomposition_check, verify_ball_iso,
                     verify_isoperimetric, verify_poincare, verify_size_iso,
                     verify_sobolev_avg, verify_sobolev_rect)


def _circle(radius=1.0, mult=1.0, n=2):
    return SphereShell(1, n, radius, multiplicity=mult)


def _sphere(radius=1.0, mult=1.0):
    return SphereShell(2, 3, radius, multiplicity=mult)


def _disc(m, n, radius=1.0, mult=1.0):
    return FlatDisc(coordinate_subspace(n, range(m)), radius, multiplicity=mult)


def _line_bundle_clipped(k=4, weight=0.3):
    return PlaneBundle.parallel_lines(k, weight=weight, clip=1.0)


def _plane_bundle_3d():
    plane = coordinate_subspace(3, [0, 1])
    offsets = np.array([[0.0, 0.0, -0.5], [0.0, 0.0, 0.5]])
    return PlaneBundle(plane, offsets, weight=1.0, clip=1.0)


def _slab_2d(unbounded: bool):
    return ProductSlab(coordinate_subspace(2, [0]), [-1.0, -1.0], [1.0, 1.0],
                       unbounded=unbounded)


def _iso(name, family, d, h, s_min, centers="atoms", grid_spacing=None,
         delta_source="analytic"):
    v = family.sample(h)
    params = MaximalParams(s_min=s_min, s_max=8.0, centers=centers,
                           grid_spacing=grid_spacing)
    dictionary = default_dictionary(v.n) if delta_source != "analytic" else None
    return [verify_isoperimetric(v, d, params, delta_source=delta_source,
                                 dictionary=dictionary, name=name)]


def paper_suite(beta_n: float | None = 1.0) -> list[VerificationReport]:
    """Every theorem verification job shipped with the toolkit."""
    reports: list[VerificationReport] = []

    # --- superlevel isoperimetric bound ---
    reports += _iso("iso/circle-near-equality", _circle(), math.pi, 0.01, 0.05,
                    centers="grid", grid_spacing=0.25)
    reports += _iso("iso/circle-d1", _circle(), 1.0, 0.02, 0.1)
    reports += _iso("iso/segment", _disc(1, 2), 0.5, 0.02, 0.1)
    reports += _iso("iso/sphere", _sphere(), 1.0, 0.08, 0.4)
    reports += _iso("iso/disc2", _disc(2, 3), 0.5, 0.05, 0.25)
    reports += _iso("iso/bundle", _line_bundle_clipped(), 0.25, 0.02, 0.1)
    reports += _iso("iso/circle-dictionary", _circle(), 1.0, 0.02, 0.1,
                    delta_source="dictionaryLowerBound")

    # --- isoperimetric bound in a ball ---
    zero2, zero3 = np.zeros(2), np.zeros(3)
    reports.append(verify_ball_iso(_disc(1, 2), zero2, 1.0, name="ball/segment"))
    reports.append(verify_ball_iso(_disc(2, 3), zero3, 1.0, name="ball/disc2"))
    reports.append(verify_ball_iso(_disc(2, 3, mult=3.0), zero3, 1.0,
                                   name="ball/disc2-mult3"))
    reports.append(verify_ball_iso(_circle(), zero2, 1.0, name="ball/circle"))
    reports.append(verify_ball_iso(_sphere(), zero3, 1.0, name="ball/sphere"))
    reports.append(verify_ball_iso(_sphere(0.5), zero3, 0.5, name="ball/half-sphere"))
    reports.append(verify_ball_iso(_line_bundle_clipped(), zero2, 1.0,
                                   name="ball/bundle"))

    # --- size-superlevel bound (two reports per job) ---
    reports += verify_size_iso(_sphere(), 1.0, name="size/sphere-d1")
    reports += verify_size_iso(_sphere(), 0.5, name="size/sphere-d05")
    reports += verify_size_iso(_disc(2, 3), 1.0, name="size/disc2")
    reports += verify_size_iso(_plane_bundle_3d(), 1.0, name="size/bundle3d")
    reports += verify_size_iso(_disc(2, 3, mult=2.0), 2.5, name="size/disc2-empty")

    # --- averaged Sobolev bound ---
    cap2 = radial_cap(zero3, 0.2, 0.45)
    bump2 = radial_bump(zero2, 0.8)
    # wide bumps that stay positive on the unit circle/sphere supports
    wide2 = radial_bump(zero2, 1.5)
    wide3 = radial_bump(zero3, 1.5)
    med_half = MedianParams(lam=0.5, radius_field=0.5)
    reports.append(verify_sobolev_avg(
        _disc(2, 3).sample(0.05), cap2, med_half, d=0.1, beta_n=None,
        name="sobavg/disc2-betafree"))
    reports.append(verify_sobolev_avg(
        _disc(2, 3).sample(0.05), cap2, med_half, d=0.1, beta_n=2.0,
        name="sobavg/disc2-beta2"))
    reports.append(verify_sobolev_avg(
        _circle().sample(0.02), wide2, med_half, d=0.2, beta_n=beta_n,
        name="sobavg/circle"))
    reports.append(verify_sobolev_avg(
        _sphere().sample(0.08), wide3, MedianParams(lam=0.25, radius_field=1.0),
        d=0.5, beta_n=beta_n, name="sobavg/sphere"))
    reports.append(verify_sobolev_avg(
        _line_bundle_clipped().sample(0.02), radial_bump(zero2, 0.5),
        MedianParams(lam=0.5, radius_field=1.0), d=0.2, beta_n=beta_n,
        name="sobavg/bundle"))

    # --- rectifiable-part Sobolev bound ---
    reports.append(verify_sobolev_rect(_disc(2, 3), cap2, 1.0, 0.05,
                                       name="sobrect/disc2-d1"))
    reports.append(verify_sobolev_rect(_disc(2, 3), cap2, 0.5, 0.05,
                                       name="sobrect/disc2-d05"))
    reports.append(verify_sobolev_rect(_circle(), wide2, 1.0, 0.02,
                                       name="sobrect/circle"))
    reports.append(verify_sobolev_rect(_sphere(), wide3, 1.0, 0.08,
                                       name="sobrect/sphere"))
    reports.append(verify_sobolev_rect(_line_bundle_clipped(), radial_bump(zero2, 0.5),
                                       0.3, 0.02, name="sobrect/bundle"))
    reports.append(verify_sobolev_rect(_slab_2d(unbounded=False),
                                       radial_bump(zero2, 0.5), 1.0, 0.05,
                                       name="sobrect/slab-vacuous"))

    # --- Poincare bound in a ball ---
    reports.append(verify_poincare(_disc(2, 3, radius=0.5), zero3, 1.0,
                                   radial_cap(zero3, 0.25, 0.6), h=0.03,
                                   name="poincare/disc2"))
    reports.append(verify_poincare(_circle(0.5), zero2, 1.0, bump2, h=0.01,
                                   name="poincare/circle"))
    reports.append(verify_poincare(_sphere(0.5), zero3, 0.75,
                                   radial_cap(zero3, 0.3, 0.7), h=0.05,
                                   name="poincare/sphere"))
    reports.append(verify_poincare(_disc(1, 2, radius=0.5), zero2, 1.0, bump2,
                                   h=0.01, name="poincare/segment"))

    return reports


def gamma_suite() -> list[VerificationReport]:
    """The ball-bound jobs plus a near-equality superlevel job: the part of
    the suite that yields informative implied constant lower bounds."""
    zero2, zero3 = np.zeros(2), np.zeros(3)
    reports = [
        verify_ball_iso(_disc(1, 2), zero2, 1.0, name="ball/segment"),
        verify_ball_iso(_disc(2, 3), zero3, 1.0, name="ball/disc2"),
        verify_ball_iso(_circle(), zero2, 1.0, name="ball/circle"),
        verify_ball_iso(_sphere(), zero3, 1.0, name="ball/sphere"),
        verify_ball_iso(_line_bundle_clipped(), zero2, 1.0, name="ball/bundle"),
    ]
    reports += _iso("iso/circle-near-equality", _circle(), math.pi, 0.01, 0.05,
                    centers="grid", grid_spacing=0.25)
    return reports


def blowup_suite() -> list[BlowupSeries]:
    return [
        blowup_series("lebesgueScaling", math.inf, 4),
        blowup_series("planeBundle", math.inf, 4),
        blowup_series("sobolevVsIso", math.inf, 4),
        blowup_series("planeBundle", 1.0, 4, expect_divergence=False),
    ]


def decomposition_suite() -> VerificationReport:
    from .fields import coordinate_profile

    # Window wide enough to contain every dictionary support (radius <= 2.5):
    # fields that poke past the sampled window would register edge flux.
    slab = ProductSlab(coordinate_subspace(2, [0]), [-2.5, -2.5], [2.5, 2.5],
                       unbounded=True)
    f = coordinate_profile(2, 1, 0.8)
    dictionary = default_dictionary(2, scales=(0.5, 1.0))
    y_grid = np.linspace(0.05, 0.95, 16)
    return decomposition_check(slab, f, y_grid, dictionary, h=0.05)
