"""Arclength geodesic coordinates from the origin.

The chart is

    Phi(t, theta, r) = ( t cos(theta + r/2) sinc(r/2),
                         t sin(theta + r/2) sinc(r/2),
                         (t^2 r / 2) * (r - sin r)/r^3 ),

written in half-angle form, which is exactly the stated exponential map and
stays numerically regular through r = 0.  Here t is the sub-Riemannian
distance from the origin, theta the initial covector angle and r the
holonomy parameter, |r| < 2 pi.

The scalar kernels A(r) = r^2 - 2 r sin r - 2 cos r + 2 and the density
numerator 2 - 2 cos r - r sin r both vanish to fourth order at r = 0 and
lose roughly ten digits to cancellation there, so each carries a Taylor
patch below |r| = 1/2 chosen to keep the relative error near 1e-12 across
the seam.
"""

import math
from dataclasses import dataclass

import numpy as np

from .group import GroupPoint

_SMALL = 0.5
_TWO_PI = 2.0 * math.pi


def _sinc(x):
    # sin(x)/x; numpy's sinc is normalized by pi
    return np.sinc(np.asarray(x, dtype=float) / np.pi)


def chart_b(r):
    """B(r) = (r^2 - 2 r sin r - 2 cos r + 2) / r^4, positive on (-2pi, 2pi]."""
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    small = np.abs(r) < _SMALL
    rs = r[small]
    rl = r[~small]
    r2 = rs * rs
    out[small] = 0.25 + r2 * (-1.0/72 + r2 * (1.0/2880 + r2 * (
        -1.0/201600 + r2 * (1.0/21772800 - r2 / 3353011200.0))))
    out[~small] = (rl * rl - 2.0 * rl * np.sin(rl)
                   - 2.0 * np.cos(rl) + 2.0) / rl**4
    return out


def chart_db(r):
    """Derivative of chart_b."""
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    small = np.abs(r) < _SMALL
    rs = r[small]
    rl = r[~small]
    r2 = rs * rs
    out[small] = rs * (-1.0/36 + r2 * (1.0/720 + r2 * (
        -1.0/33600 + r2 * (1.0/2721600 - r2 / 335301120.0))))
    a = rl * rl - 2.0 * rl * np.sin(rl) - 2.0 * np.cos(rl) + 2.0
    out[~small] = (2.0 * rl * rl * (1.0 - np.cos(rl)) - 4.0 * a) / rl**5
    return out


def mu(r):
    """Pushforward density factor: Lebesgue = t^3 mu(r) dt dtheta dr."""
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(np.abs(r) > _TWO_PI + 1e-12):
        raise ValueError("mu is defined for |r| <= 2 pi")
    out = np.empty_like(r)
    small = np.abs(r) < _SMALL
    rs = r[small]
    rl = r[~small]
    r2 = rs * rs
    out[small] = 1.0/12 + r2 * (-1.0/180 + r2 * (1.0/6720 + r2 * (
        -1.0/453600 + r2 * (1.0/47900160 - r2 / 7264857600.0))))
    out[~small] = (2.0 - 2.0 * np.cos(rl) - rl * np.sin(rl)) / rl**4
    return float(out[0]) if scalar else out


def _z_factor(r):
    # (r - sin r)/r^3, even, smooth; series below 0.25
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    small = np.abs(r) < 0.25
    rs = r[small]
    rl = np.where(small, 1.0, r)
    r2 = rs * rs
    out[small] = 1.0/6 + r2 * (-1.0/120 + r2 * (1.0/5040 + r2 * (
        -1.0/362880 + r2 / 39916800.0)))
    out[~small] = ((rl - np.sin(rl)) / rl**3)[~small]
    return out


def w_coeff(r):
    """w(r) = r / (2 - r cot(r/2)) on 0 < |r| < 2 pi; odd, with a 6/r pole at 0."""
    r = float(r)
    if r == 0.0:
        raise ValueError("w has a pole at r = 0")
    if not abs(r) < _TWO_PI:
        raise ValueError("w is defined on |r| < 2 pi")
    return r / (2.0 - r / math.tan(0.5 * r))


def r_times_w(r):
    """Stable evaluation of r * w(r); extends to 6 at r = 0."""
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    small = np.abs(r) < _SMALL
    rs = r[small]
    rl = np.where(small, 1.0, r)
    r2 = rs * rs
    # denominator 2 - r cot(r/2) = r^2/6 + r^4/360 + r^6/15120 + r^8/604800
    den = 1.0/6 + r2 * (1.0/360 + r2 * (1.0/15120 + r2 / 604800.0))
    out[small] = 1.0 / den
    out[~small] = (rl * rl / (2.0 - rl / np.tan(0.5 * rl)))[~small]
    return out


@dataclass(frozen=True)
class GeodesicCoordinates:
    """Chart coordinates (t, theta, r): distance, angle, holonomy."""

    t: float
    theta: float
    r: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("t must be positive")
        if not abs(self.r) < _TWO_PI:
            raise ValueError("r must lie strictly inside (-2 pi, 2 pi)")


def _exp_map_arrays(t, theta, r):
    t = np.asarray(t, dtype=float)
    theta = np.asarray(theta, dtype=float)
    r = np.asarray(r, dtype=float)
    half = _sinc(0.5 * r)
    x = t * np.cos(theta + 0.5 * r) * half
    y = t * np.sin(theta + 0.5 * r) * half
    z = 0.5 * t * t * r * _z_factor(r)
    return x, y, z


def exp_map(c: GeodesicCoordinates) -> GroupPoint:
    """Chart point Phi(t, theta, r)."""
    x, y, z = _exp_map_arrays(c.t, c.theta, c.r)
    return GroupPoint(float(x), float(y), float(z))


def jacobian_det(c: GeodesicCoordinates, h: float = 1e-6) -> float:
    """Determinant of the numerical Jacobian of the chart; equals t^3 mu(r)."""
    cols = []
    for dt, dth, dr in ((h, 0.0, 0.0), (0.0, h, 0.0), (0.0, 0.0, h)):
        plus = _exp_map_arrays(c.t + dt, c.theta + dth, c.r + dr)
        minus = _exp_map_arrays(c.t - dt, c.theta - dth, c.r - dr)
        cols.append([(float(a) - float(b)) / (2.0 * h)
                     for a, b in zip(plus, minus)])
    return float(np.linalg.det(np.array(cols).T))


def _psi(r):
    # (r - sin r)/(4 (1 - cos r)) = (r - sin r)/(8 sin^2(r/2)); strictly
    # increasing on (0, 2 pi); series below 0.25 covers the cancellation
    if abs(r) < 0.25:
        r2 = r * r
        return r * (1.0/12 + r2 * (1.0/360 + r2 * (1.0/10080 + r2 / 302400.0)))
    return (r - math.sin(r)) / (8.0 * math.sin(0.5 * r) ** 2)


_PSI_GUARD_DONE = False


def _psi_monotone_guard():
    """One-time fine-grid check that the inversion target is increasing."""
    global _PSI_GUARD_DONE
    if _PSI_GUARD_DONE:
        return
    grid = np.linspace(1e-6, _TWO_PI - 1e-9, 20001)
    vals = np.array([_psi(g) for g in grid])
    if not np.all(np.diff(vals) > 0):
        raise AssertionError("monotonicity of the inversion target failed")
    _PSI_GUARD_DONE = True


def chart_coordinates(p: GroupPoint) -> GeodesicCoordinates:
    """Invert the chart for a point off the origin and off the z-axis."""
    rho2 = p.x * p.x + p.y * p.y
    if rho2 == 0.0:
        raise ValueError("the chart does not cover the z-axis")
    if p.z == 0.0:
        t = math.sqrt(rho2)
        theta = math.atan2(p.y, p.x) % _TWO_PI
        # r = 0 sits on the chart but GeodesicCoordinates allows it
        return GeodesicCoordinates(t, theta, 0.0)
    _psi_monotone_guard()
    target = abs(p.z) / rho2
    lo, hi = 0.0, _TWO_PI
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _psi(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    r = 0.5 * (lo + hi) * (1.0 if p.z > 0 else -1.0)
    t = math.sqrt(rho2) * abs(r) / (2.0 * abs(math.sin(0.5 * r)))
    theta = (math.atan2(p.y, p.x) - 0.5 * r) % _TWO_PI
    return GeodesicCoordinates(t, theta, r)


def distance_from_origin(p: GroupPoint) -> float:
    """Sub-Riemannian distance d(p, 0); total on R^3."""
    rho2 = p.x * p.x + p.y * p.y
    if rho2 == 0.0:
        # boundary of the chart: r -> +-2 pi gives z = t^2/(4 pi)
        return 2.0 * math.sqrt(math.pi * abs(p.z))
    if p.z == 0.0:
        return math.sqrt(rho2)
    return chart_coordinates(p).t


def koranyi_norm_in_chart(t, r):
    """Koranyi norm of Phi(t, ., r): t (4 B(r))^(1/4), any |r| < 2 pi."""
    return np.asarray(t, dtype=float) * (4.0 * chart_b(r)) ** 0.25


def gradient_frame(c: GeodesicCoordinates):
    """Orthonormal horizontal frame in chart components.

    Returns (radial, perpendicular) as (t, theta, r)-component triples; the
    radial one is the horizontal gradient of the distance.  The perpendicular
    coefficients are singular at r = 0: there the radial field is still
    returned and the perpendicular slot is None.
    """
    radial = (1.0, 0.0, c.r / c.t)
    if c.r == 0.0:
        return radial, None
    r = c.r
    denom = r * math.sin(r) + 2.0 * math.cos(r) - 2.0
    perp = (0.0,
            (r / c.t) * (r - math.sin(r)) / denom,
            (r / c.t) * w_coeff(r))
    return radial, perp


def geodesic_horizontality(theta0: float, h0: float, samples: int,
                           t_max: float = 3.0, fd_step: float = 1e-5) -> float:
    """Horizontality plus unit-speed defect of the ray t -> Phi(t, theta0, t h0).

    Velocities come from central differences in t; the result is the maximum
    over the sampled parameters of |z' - (x y' - y x')/2| + ||(x', y')| - 1|.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    ts = np.linspace(t_max / samples, t_max, samples)
    if np.any(np.abs(ts * h0) >= _TWO_PI):
        raise ValueError("ray leaves the chart: |t h0| must stay below 2 pi")
    h = fd_step
    xp, yp, zp = _exp_map_arrays(ts + h, theta0, (ts + h) * h0)
    xm, ym, zm = _exp_map_arrays(ts - h, theta0, (ts - h) * h0)
    x, y, _ = _exp_map_arrays(ts, theta0, ts * h0)
    dx = (xp - xm) / (2 * h)
    dy = (yp - ym) / (2 * h)
    dz = (zp - zm) / (2 * h)
    horiz = np.abs(dz - 0.5 * (x * dy - y * dx))
    speed = np.abs(np.hypot(dx, dy) - 1.0)
    return float(np.max(horiz + speed))
