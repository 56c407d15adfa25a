"""Group algebra of the first Heisenberg group and the geometry built on it.

Points are triples (x, y, z) with the non-commutative product

    (x, y, z) * (x', y', z') = (x + x', y + y', z + z' + (x y' - x' y)/2).

The left-invariant horizontal fields are X = d/dx - (y/2) d/dz and
Y = d/dy + (x/2) d/dz, and the sub-Laplacian is X^2 + Y^2.  Differential
operators act on sampled callables through central finite differences.
"""

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import koranyi_shell_rule

GAMMA_CONSTANT = 1.0 / (2.0 * math.pi)
# Normalization of the fundamental solution: pairing Gamma with the
# sub-Laplacian of a test function recovers exactly the value at the origin.
# (Flux of N^-2 through Koranyi spheres is 2*pi for this field normalization.)


@dataclass(frozen=True)
class GroupPoint:
    """A point of the Heisenberg group, coordinates on R^3."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)
                and math.isfinite(self.z)):
            raise ValueError("GroupPoint coordinates must be finite")

    def as_array(self):
        return np.array([self.x, self.y, self.z])


ORIGIN = GroupPoint(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class ScalarField:
    """A sampled complex-valued function on the group.

    `func` maps coordinate arrays (x, y, z) to values and must broadcast;
    evaluation has to be deterministic.  `h` is the step used whenever a
    derivative of this field is requested.
    """

    func: object
    h: float = 1e-4

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("finite-difference step must be positive")

    def __call__(self, p: GroupPoint):
        return complex(np.asarray(self.func(p.x, p.y, p.z)))

    def eval(self, x, y, z):
        return self.func(x, y, z)


def group_mul(p: GroupPoint, q: GroupPoint) -> GroupPoint:
    """Group product p * q."""
    return GroupPoint(p.x + q.x, p.y + q.y,
                      p.z + q.z + 0.5 * (p.x * q.y - q.x * p.y))


def group_inv(p: GroupPoint) -> GroupPoint:
    """Group inverse, coordinate negation."""
    return GroupPoint(-p.x, -p.y, -p.z)


def dilate(lam: float, p: GroupPoint) -> GroupPoint:
    """Anisotropic dilation (lam x, lam y, lam^2 z), lam > 0."""
    if not lam > 0:
        raise ValueError("dilation parameter must be positive")
    return GroupPoint(lam * p.x, lam * p.y, lam * lam * p.z)


def koranyi_norm(p) -> float:
    """Koranyi gauge ((x^2+y^2)^2 + 16 z^2)^(1/4)."""
    if isinstance(p, GroupPoint):
        return float(((p.x**2 + p.y**2) ** 2 + 16.0 * p.z**2) ** 0.25)
    x, y, z = p
    return ((np.asarray(x)**2 + np.asarray(y)**2) ** 2
            + 16.0 * np.asarray(z)**2) ** 0.25


def fundamental_solution(p: GroupPoint) -> float:
    """Fundamental solution of minus the sub-Laplacian, 1/(2 pi N(p)^2).

    The constant is fixed by the weak identity: integrating this kernel
    against -Delta(phi) over the complement of a shrinking Koranyi ball
    converges to phi(0).
    """
    n = koranyi_norm(p)
    if n == 0.0:
        raise ValueError("fundamental solution has a pole at the origin")
    return GAMMA_CONSTANT / n**2


def _gamma_values(x, y, z):
    n2 = np.sqrt((x**2 + y**2) ** 2 + 16.0 * z**2)
    return GAMMA_CONSTANT / n2


_FIELD_NAMES = ("X", "Y", "Z")


def _partial(f: ScalarField, p: GroupPoint, axis: int, h: float):
    e = [0.0, 0.0, 0.0]
    e[axis] = h
    plus = f.func(p.x + e[0], p.y + e[1], p.z + e[2])
    minus = f.func(p.x - e[0], p.y - e[1], p.z - e[2])
    return (np.asarray(plus) - np.asarray(minus)) / (2.0 * h)


def apply_field(which: str, f: ScalarField, p: GroupPoint,
                richardson: bool = False):
    """Apply a left-invariant frame field (X, Y or Z) to f at p.

    Central differences with step f.h; one Richardson level is available
    when the O(h^2) tail matters.
    """
    if which not in _FIELD_NAMES:
        raise ValueError(f"unknown field {which!r}, expected one of X, Y, Z")

    def at_step(h):
        if which == "X":
            return _partial(f, p, 0, h) - 0.5 * p.y * _partial(f, p, 2, h)
        if which == "Y":
            return _partial(f, p, 1, h) + 0.5 * p.x * _partial(f, p, 2, h)
        return _partial(f, p, 2, h)

    if richardson:
        return complex((4.0 * at_step(f.h / 2.0) - at_step(f.h)) / 3.0)
    return complex(at_step(f.h))


def apply_sublaplacian(f: ScalarField, p: GroupPoint,
                       richardson: bool = False):
    """Sub-Laplacian of f at p:

        (d_x^2 + d_y^2 + (x^2+y^2)/4 d_z^2 + (x d_y - y d_x) d_z) f.
    """
    g = f.func
    x, y, z = p.x, p.y, p.z

    def at_step(h):
        c = np.asarray(g(x, y, z))
        d2x = (np.asarray(g(x + h, y, z)) - 2 * c + np.asarray(g(x - h, y, z))) / h**2
        d2y = (np.asarray(g(x, y + h, z)) - 2 * c + np.asarray(g(x, y - h, z))) / h**2
        d2z = (np.asarray(g(x, y, z + h)) - 2 * c + np.asarray(g(x, y, z - h))) / h**2
        dyz = (np.asarray(g(x, y + h, z + h)) - np.asarray(g(x, y + h, z - h))
               - np.asarray(g(x, y - h, z + h)) + np.asarray(g(x, y - h, z - h))) / (4 * h**2)
        dxz = (np.asarray(g(x + h, y, z + h)) - np.asarray(g(x + h, y, z - h))
               - np.asarray(g(x - h, y, z + h)) + np.asarray(g(x - h, y, z - h))) / (4 * h**2)
        return d2x + d2y + 0.25 * (x * x + y * y) * d2z + x * dyz - y * dxz

    if richardson:
        return complex((4.0 * at_step(f.h / 2.0) - at_step(f.h)) / 3.0)
    return complex(at_step(f.h))


def gamma_pairing(phi: ScalarField, eps: float, r_max: float = 8.0,
                  nr: int = 64, nphi: int = 32, npsi: int = 16) -> float:
    """Integral of Gamma * (-Delta phi) over the shell {eps < N < r_max}.

    For a rapidly decaying smooth phi this converges to phi(0) as eps -> 0
    and the rule is refined; the ball N < eps is excised because the kernel
    node at 0 is undefined (the pole itself is integrable).
    """
    if not eps > 0:
        raise ValueError("excision radius must be positive")
    x, y, z, w = koranyi_shell_rule(eps, r_max, nr, nphi, npsi)
    g = phi.func
    h = phi.h

    c = np.asarray(g(x, y, z))
    d2x = (np.asarray(g(x + h, y, z)) - 2 * c + np.asarray(g(x - h, y, z))) / h**2
    d2y = (np.asarray(g(x, y + h, z)) - 2 * c + np.asarray(g(x, y - h, z))) / h**2
    d2z = (np.asarray(g(x, y, z + h)) - 2 * c + np.asarray(g(x, y, z - h))) / h**2
    dyz = (np.asarray(g(x, y + h, z + h)) - np.asarray(g(x, y + h, z - h))
           - np.asarray(g(x, y - h, z + h)) + np.asarray(g(x, y - h, z - h))) / (4 * h**2)
    dxz = (np.asarray(g(x + h, y, z + h)) - np.asarray(g(x + h, y, z - h))
           - np.asarray(g(x - h, y, z + h)) + np.asarray(g(x - h, y, z - h))) / (4 * h**2)
    lap = d2x + d2y + 0.25 * (x * x + y * y) * d2z + x * dyz - y * dxz
    return float(np.real(np.sum(w * _gamma_values(x, y, z) * (-lap))))


def gamma_l2_blowup(epsilons, nr: int = 48, nphi: int = 24, npsi: int = 12):
    """Squared L2 mass of Gamma on the shells {eps < N < 1}.

    Requires strictly decreasing positive epsilons; the returned sequence is
    increasing and grows like log(1/eps), which is the numerical face of the
    failure of square-integrability at the pole.
    """
    eps = [float(e) for e in epsilons]
    if not eps or any(e <= 0 for e in eps):
        raise ValueError("epsilons must be positive")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("epsilons must be strictly decreasing")
    out = []
    for e in eps:
        if e >= 1.0:
            raise ValueError("epsilons must lie below the unit shell")
        x, y, z, w = koranyi_shell_rule(e, 1.0, nr, nphi, npsi)
        out.append(float(np.sum(w * _gamma_values(x, y, z) ** 2)))
    return out
