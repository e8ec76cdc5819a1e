"""Compactly supported smooth test functions and vector fields.

Every field carries its exact derivative; the evaluation modules never
differentiate numerically.  Building blocks are the standard mollifier
bump and a C-infinity smoothstep, combined radially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def bump(t: float) -> float:
    """C-infinity bump: exp(1 - 1/(1 - t^2)) on (-1, 1), zero outside."""
    t = abs(t)
    if t >= 1.0:
        return 0.0
    return math.exp(1.0 - 1.0 / (1.0 - t * t))


def bump_prime(t: float) -> float:
    if abs(t) >= 1.0:
        return 0.0
    u = 1.0 - t * t
    return bump(t) * (-2.0 * t / (u * u))


def _sigma(u: float) -> float:
    return math.exp(-1.0 / u) if u > 0.0 else 0.0


def smoothstep(u: float) -> float:
    """C-infinity transition: 0 for u <= 0, 1 for u >= 1."""
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    a, b = _sigma(u), _sigma(1.0 - u)
    return a / (a + b)


def smoothstep_prime(u: float) -> float:
    if u <= 0.0 or u >= 1.0:
        return 0.0
    a, b = _sigma(u), _sigma(1.0 - u)
    da = a / (u * u)
    db = -b / ((1.0 - u) * (1.0 - u))
    return (da * b - a * db) / ((a + b) * (a + b))


@dataclass(frozen=True)
class ScalarTestFunction:
    """Smooth scalar function with exact gradient.

    support_radius is None for functions without compact support (only
    the decomposition generators use those).
    """

    f: object
    grad: object
    center: np.ndarray
    support_radius: float | None
    name: str = ""

    def __call__(self, x) -> float:
        return self.f(np.asarray(x, dtype=float))

    def gradient(self, x) -> np.ndarray:
        return np.asarray(self.grad(np.asarray(x, dtype=float)), dtype=float)


@dataclass(frozen=True)
class TestVectorField:
    """Smooth compactly supported vector field with exact Jacobian."""

    theta: object
    jacobian: object
    center: np.ndarray
    support_radius: float
    sup_norm: float
    name: str = ""

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.theta(np.asarray(x, dtype=float)), dtype=float)

    def d(self, x) -> np.ndarray:
        return np.asarray(self.jacobian(np.asarray(x, dtype=float)), dtype=float)

    def negated(self) -> "TestVectorField":
        return TestVectorField(
            lambda x: -self.theta(x),
            lambda x: -self.jacobian(x),
            self.center,
            self.support_radius,
            self.sup_norm,
            name=f"-{self.name}",
        )

    def dilated(self, lam: float) -> "TestVectorField":
        """theta_lam(x) = theta(x / lam)."""
        return TestVectorField(
            lambda x: self.theta(x / lam),
            lambda x: self.jacobian(x / lam) / lam,
            lam * self.center,
            lam * self.support_radius,
            self.sup_norm,
            name=f"{self.name}@dilate{lam}",
        )


def radial_bump(center, radius: float, height: float = 1.0, name: str = "") -> ScalarTestFunction:
    """height * bump(|x - c| / radius)."""
    center = np.asarray(center, dtype=float)

    def f(x):
        return height * bump(np.linalg.norm(x - center) / radius)

    def grad(x):
        d = x - center
        rho = np.linalg.norm(d)
        if rho < 1e-300 or rho >= radius:
            return np.zeros_like(d)
        return (height * bump_prime(rho / radius) / radius) * (d / rho)

    return ScalarTestFunction(f, grad, center, radius, name=name or f"bump(r={radius})")


def radial_cap(center, inner: float, outer: float, height: float = 1.0,
               name: str = "") -> ScalarTestFunction:
    """Plateau of the given height inside ``inner``, smooth decay to 0 at ``outer``."""
    center = np.asarray(center, dtype=float)
    width = outer - inner
    if width <= 0:
        raise ValueError("outer radius must exceed inner radius")

    def f(x):
        rho = np.linalg.norm(x - center)
        return height * smoothstep((outer - rho) / width)

    def grad(x):
        d = x - center
        rho = np.linalg.norm(d)
        if rho < 1e-300 or rho >= outer:
            return np.zeros_like(d)
        return (-height * smoothstep_prime((outer - rho) / width) / width) * (d / rho)

    return ScalarTestFunction(f, grad, center, outer, name=name or f"cap({inner},{outer})")


def coordinate_profile(n: int, axis: int, scale: float, height: float = 1.0,
                       name: str = "") -> ScalarTestFunction:
    """height * bump(x_axis / scale): constant along every other axis.

    Not compactly supported in R^n; used for product-structure examples
    where the function must be constant along a coordinate plane.
    """

    def f(x):
        return height * bump(x[axis] / scale)

    def grad(x):
        g = np.zeros(n)
        g[axis] = height * bump_prime(x[axis] / scale) / scale
        return g

    return ScalarTestFunction(f, grad, np.zeros(n), None, name=name or f"profile(x{axis})")


def linear_functional(n: int, direction, name: str = "") -> ScalarTestFunction:
    direction = np.asarray(direction, dtype=float)

    def f(x):
        return float(x @ direction)

    def grad(x):
        return direction.copy()

    return ScalarTestFunction(f, grad, np.zeros(n), None, name=name or "linear")


def bump_field(center, radius: float, direction, name: str = "") -> TestVectorField:
    """bump(|x - c| / radius) * e with |e| = 1; sup norm exactly 1."""
    center = np.asarray(center, dtype=float)
    e = np.asarray(direction, dtype=float)
    e = e / np.linalg.norm(e)

    def theta(x):
        return bump(np.linalg.norm(x - center) / radius) * e

    def jac(x):
        d = x - center
        rho = np.linalg.norm(d)
        if rho < 1e-300 or rho >= radius:
            return np.zeros((len(d), len(d)))
        g = (bump_prime(rho / radius) / radius) * (d / rho)
        return np.outer(e, g)

    return TestVectorField(theta, jac, center, radius, 1.0,
                           name=name or f"bump*e@{radius}")


def radial_plateau_field(center, r0: float, r1: float, r2: float, r3: float,
                         name: str = "") -> TestVectorField:
    """Unit radial field psi(|x-c|) (x-c)/|x-c| with psi = 1 on [r1, r2].

    psi rises smoothly from 0 on [r0, r1] and falls to 0 on [r2, r3]; the
    field vanishes near the center, so it is smooth everywhere.  Its sup
    norm is exactly 1, which makes it admissible in total-variation
    dictionaries, and it pairs with a sphere of radius in [r1, r2] to give
    the full boundary/curvature mass.
    """
    if not 0.0 <= r0 < r1 <= r2 < r3:
        raise ValueError("need 0 <= r0 < r1 <= r2 < r3")
    center = np.asarray(center, dtype=float)
    up, down = r1 - r0, r3 - r2

    def psi(rho):
        return smoothstep((rho - r0) / up) * smoothstep((r3 - rho) / down)

    def psi_prime(rho):
        s1 = smoothstep((rho - r0) / up)
        s2 = smoothstep((r3 - rho) / down)
        return (smoothstep_prime((rho - r0) / up) / up) * s2 \
            - s1 * (smoothstep_prime((r3 - rho) / down) / down)

    def theta(x):
        d = x - center
        rho = np.linalg.norm(d)
        if rho <= r0 or rho >= r3:
            return np.zeros_like(d)
        return psi(rho) * (d / rho)

    def jac(x):
        d = x - center
        rho = np.linalg.norm(d)
        nn = len(d)
        if rho <= r0 or rho >= r3:
            return np.zeros((nn, nn))
        u = d / rho
        uu = np.outer(u, u)
        return psi_prime(rho) * uu + (psi(rho) / rho) * (np.eye(nn) - uu)

    return TestVectorField(theta, jac, center, r3, 1.0,
                           name=name or f"radial({r0},{r1},{r2},{r3})")


def default_dictionary(n: int, centers=None, scales=(0.5, 1.0, 2.0)) -> list[TestVectorField]:
    """Deterministic sup-normalized dictionary of test fields.

    Coordinate bump fields (both signs via the caller taking absolute
    pairings) at each center/scale plus radial plateau fields; small but
    rich enough to expose the first variation of the built-in families.
    """
    if centers is None:
        centers = [np.zeros(n)] + [0.5 * e for e in np.eye(n)] + [-0.5 * e for e in np.eye(n)]
        centers = centers[:5]
    fields = []
    for c in centers:
        for s in scales:
            for axis in range(n):
                e = np.zeros(n)
                e[axis] = 1.0
                fields.append(bump_field(c, s, e, name=f"b[{axis}]s{s}"))
            fields.append(
                radial_plateau_field(c, 0.05 * s, 0.5 * s, 1.5 * s, 2.0 * s,
                                     name=f"rad s{s}")
            )
    return fields
