"""First variation, weak derivatives, and distributional boundaries.

All operations are quadratures over immutable atomic varifolds; for the
analytic families the first variation is additionally available from
closed-form curvature/boundary data, and the two sources are kept
strictly separate (see ``DeltaSource``).
"""

from __future__ import annotations

import numpy as np

from .families import AnalyticFamily, DeltaAtoms, UnsupportedFamilyError
from .fields import ScalarTestFunction, TestVectorField
from .varifold import DiscreteVarifold


def first_variation(v: DiscreteVarifold, theta: TestVectorField) -> float:
    """delta V (theta) = sum of w * (P . Dtheta(x)) over the atoms.

    The dot is the Frobenius inner product, i.e. the tangential divergence
    of theta with respect to each atom's plane.
    """
    if len(v) == 0:
        return 0.0
    total = 0.0
    for x, p, w in zip(v.positions, v.planes, v.weights):
        total += w * float(np.sum(p * theta.d(x)))
    return total


def total_variation_lower_bound(v: DiscreteVarifold, dictionary) -> float:
    """Certified lower bound for ||delta V||(R^n) from a finite dictionary.

    Uses |delta V(theta)| (theta and -theta are both admissible).  The
    bound is conservative: substituting it on an inequality right-hand
    side can only make a check harder to pass.
    """
    dictionary = list(dictionary)
    if not dictionary:
        raise ValueError("dictionary must be nonempty")
    for theta in dictionary:
        if theta.sup_norm > 1.0 + 1e-12:
            raise ValueError(f"dictionary field {theta.name!r} has sup norm > 1")
    return max(0.0, max(abs(first_variation(v, th)) for th in dictionary))


def weak_derivative_c1(v: DiscreteVarifold, f: ScalarTestFunction, x) -> np.ndarray:
    """V Df(x) = Df(x) composed with the fiber-averaged projection q(x)."""
    q = v.fiber_projection(x)
    return f.gradient(x) @ q


def weak_gradient_norms(v: DiscreteVarifold, f: ScalarTestFunction) -> np.ndarray:
    """|V Df| at every atom, using each atom's own plane as its fiber.

    For single-plane fibers this is |Df(x) . P|; repeated positions are
    handled atom-by-atom, which integrates the same total because the
    fiber average is itself an integral over the fiber.
    """
    if len(v) == 0:
        return np.zeros(0)
    return np.array(
        [np.linalg.norm(f.gradient(x) @ p) for x, p in zip(v.positions, v.planes)]
    )


def integral_weak_gradient(v: DiscreteVarifold, f: ScalarTestFunction) -> float:
    """Quadrature of |V Df| against ||V||."""
    if len(v) == 0:
        return 0.0
    return float(np.sum(v.weights * weak_gradient_norms(v, f)))


def integral_against_delta(family: AnalyticFamily, f: ScalarTestFunction, h: float) -> float:
    """Integral of f against ||delta V|| from the family's analytic data."""
    return family.delta_atoms(h).integrate_scalar(f)


def family_delta_eval(family: AnalyticFamily, theta: TestVectorField, h: float,
                      predicate=None) -> float:
    """(delta V)(theta), optionally restricted to E, from analytic data."""
    atoms = family.delta_atoms(h)
    if predicate is not None and len(atoms):
        keep = np.fromiter((bool(predicate(x)) for x in atoms.positions),
                           dtype=bool, count=len(atoms))
        atoms = DeltaAtoms(atoms.positions[keep], atoms.directions[keep],
                           atoms.weights[keep])
    return atoms.pair_vector_field(theta)


def distributional_boundary_eval(v: DiscreteVarifold, predicate,
                                 theta: TestVectorField) -> float:
    """V dE (theta) = (delta V restricted to E)(theta) - delta(V restricted to E)(theta).

    The first term comes from the sampled family's analytic boundary and
    curvature data restricted to E; the second is the quadrature of the
    restricted varifold.  (For a purely atomic V both terms would coincide
    and the value would be identically zero, so family data is required.)
    """
    if v.meta is None:
        raise UnsupportedFamilyError(
            "distributional boundary evaluation needs a family-backed sample"
        )
    family, h = v.meta
    restricted = family_delta_eval(family, theta, h, predicate=predicate)
    return restricted - first_variation(v.restrict(predicate), theta)
