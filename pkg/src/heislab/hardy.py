"""Estimation of the Hardy constant for the distance weight.

The quotient of gradient energy against u^2/delta^2 is evaluated on the
power-of-the-gauge trial family written in the geodesic chart.  In the
sharp limit the quotient collapses to a ratio of two 1D integrals over the
holonomy variable, which is what `hardy_ratio` computes; `quotient_for_alpha`
evaluates the full truncated trial function at an admissible exponent,
cutoff region included, and stays above that limit.
"""

import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np

from .geodesics import chart_b, chart_db, mu, r_times_w, _exp_map_arrays, _sinc
from .group import ScalarField, koranyi_norm
from .quadrature import composite_legendre, gauss_legendre_on

_TWO_PI = 2.0 * math.pi
CLAIMED_BOUND = 0.798


def gamma_alpha(alpha, r):
    """Weight gamma_alpha(r) = (4 B(r))^(alpha/4); equals 1 at r = 0."""
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(np.abs(r) > _TWO_PI + 1e-12):
        raise ValueError("gamma_alpha is defined for |r| <= 2 pi")
    out = (4.0 * chart_b(r)) ** (alpha / 4.0)
    return float(out[0]) if scalar else out


def eta(r):
    """Angular energy fraction eta(r) = r^2 (1 - cos r) / (2 A(r)), in [0, 1].

    Evaluated as sinc(r/2)^2 / (4 B(r)); decreasing in |r| with eta(0) = 1
    and eta(+-2 pi) = 0.
    """
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(np.abs(r) > _TWO_PI + 1e-12):
        raise ValueError("eta is defined for |r| <= 2 pi")
    out = _sinc(0.5 * r) ** 2 / (4.0 * chart_b(r))
    return float(out[0]) if scalar else out


@dataclass
class HardyReport:
    """Result of the sharp-limit ratio computation plus sweep metadata."""

    ratio: float
    numerator: float
    denominator: float
    quadrature_nodes: int
    alpha_sweep: list = field(default_factory=list)
    bound_claimed: float = CLAIMED_BOUND
    converged: bool = True
    convergence_delta: float = 0.0

    def __post_init__(self):
        if not (self.numerator > 0 and self.denominator > 0):
            raise ValueError("both integrals must be positive")
        if abs(self.ratio - self.numerator / self.denominator) > 1e-12:
            raise ValueError("ratio must equal numerator/denominator")
        if not self.ratio < 1.0:
            raise ValueError("ratio must be strictly below 1")

    def to_json(self) -> str:
        doc = asdict(self)
        doc["alpha_sweep"] = [{"alpha": a, "quotient": q}
                              for a, q in self.alpha_sweep]
        return json.dumps(doc, sort_keys=True, indent=2)


def _r_rule(nodes):
    return composite_legendre(-_TWO_PI, _TWO_PI, nodes)


def hardy_ratio(nodes: int = 4096) -> HardyReport:
    """Ratio of the two holonomy integrals bounding the Hardy constant.

    Accuracy is guaranteed from 64 nodes up; lower counts are allowed so a
    degraded run still produces a report, with the convergence flag left to
    the caller.
    """
    if nodes < 8:
        raise ValueError("need at least 8 quadrature nodes")
    r, w = _r_rule(nodes)
    g = gamma_alpha(-2.0, r) * mu(r)
    den = float(np.sum(w * g))
    num = float(np.sum(w * g * eta(r)))
    return HardyReport(ratio=num / den, numerator=num, denominator=den,
                       quadrature_nodes=len(r))


def smoothstep(t):
    """Quintic smoothstep: 0 below 0, 1 above 1, C^2 ramp between."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    return t ** 3 * (10.0 + t * (-15.0 + 6.0 * t))


def smoothstep_deriv(t):
    t = np.asarray(t, dtype=float)
    inside = (t > 0.0) & (t < 1.0)
    tc = np.clip(t, 0.0, 1.0)
    return np.where(inside, 30.0 * tc * tc * (1.0 - tc) ** 2, 0.0)


def quotient_for_alpha(alpha: float, cutoff_scale: float = 1.0,
                       nodes: int = 2048) -> float:
    """Energy quotient of the truncated trial function at exponent alpha.

    The trial function is chi(t) times the frozen gauge profile below the
    cutoff scale and the homogeneous power above it; admissibility at
    infinity needs alpha < -2, and the family is restricted to [-3, -2).
    The t-integral of the homogeneous tail is carried out in closed form,
    truncated where its remainder drops below 1e-10.
    """
    if not (-3.0 <= alpha < -2.0):
        raise ValueError("alpha must lie in [-3, -2)")
    if not cutoff_scale > 0:
        raise ValueError("cutoff scale must be positive")
    s = float(cutoff_scale)
    r, wr = _r_rule(nodes)
    ga = gamma_alpha(alpha, r)
    j_plain = float(np.sum(wr * ga * mu(r)))
    j_eta = float(np.sum(wr * ga * eta(r) * mu(r)))

    # tail integral of t^(alpha+1) from s with T_max^(alpha+2) = 1e-10 |alpha+2|
    tail = (1e-10 * abs(alpha + 2.0) - s ** (alpha + 2.0)) / (alpha + 2.0)

    v = np.sqrt(ga)
    dv = v * (alpha / 8.0) * chart_db(r) / chart_b(r)
    tg, wt = gauss_legendre_on(0.5 * s, s, 128)
    tau = (tg - 0.5 * s) / (0.5 * s)
    chi = smoothstep(tau)
    dchi = smoothstep_deriv(tau) * (2.0 / s)
    sa = s ** (alpha / 2.0)

    tcol = tg[:, None]
    v1 = dchi[:, None] * (sa * v)[None, :] \
        + (r[None, :] / tcol) * chi[:, None] * (sa * dv)[None, :]
    v2 = (r_times_w(r)[None, :] / tcol) * chi[:, None] * (sa * dv)[None, :]
    meas = (wt[:, None] * wr[None, :]) * tcol ** 3 * mu(r)[None, :]
    num_strip = float(np.sum(meas * (v1 * v1 + v2 * v2)))
    den_strip = s ** alpha * float(np.sum(wt * chi * chi * tg)) * j_plain

    num = num_strip + (alpha * alpha / 4.0) * tail * j_eta
    den = den_strip + tail * j_plain
    return num / den


def alpha_sweep(alphas=(-2.9, -2.5, -2.2, -2.1, -2.05, -2.01),
                cutoff_scale: float = 1.0, nodes: int = 2048):
    """Quotients over a grid of admissible exponents."""
    return [(float(a), quotient_for_alpha(a, cutoff_scale, nodes))
            for a in alphas]


def build_report(nodes: int = 4096, sweep_nodes: int = 2048,
                 alphas=(-2.9, -2.5, -2.2, -2.1, -2.05, -2.01),
                 convergence_tol: float = 1e-8) -> HardyReport:
    """Full report: ratio, node-doubling convergence flag, and alpha sweep."""
    rep = hardy_ratio(nodes)
    refined = hardy_ratio(2 * nodes)
    delta = abs(rep.ratio - refined.ratio)
    rep.converged = bool(delta < convergence_tol)
    rep.convergence_delta = delta
    rep.alpha_sweep = alpha_sweep(alphas, nodes=sweep_nodes)
    return rep


# ----------------------------------------------------------------------
# Gauge-weight inequality check (unit constant, gauge weight |grad N|^2/N^2)

def gradient_weight_in_chart(r):
    """|grad_H N|^2 in the chart: (1 - cos r)/sqrt(A(r)); weight is this / N^2.

    Against the distance weight this combines to eta(r)/t^2, which is the
    form used by the quadrature below.
    """
    r = np.asarray(r, dtype=float)
    return 2.0 * np.sin(0.5 * r) ** 2 / (r ** 4 * chart_b(r)) ** 0.5


def _reject_origin_overlap(u: ScalarField, probe_gauge: float = 1e-4):
    """The inequality needs supports avoiding the origin; probe a tiny shell."""
    ang = np.linspace(0.0, 2.0 * math.pi, 8, endpoint=False)
    x = np.append(probe_gauge * np.cos(ang), [0.0, 0.0])
    y = np.append(probe_gauge * np.sin(ang), [0.0, 0.0])
    z = np.append(np.zeros(8), [probe_gauge ** 2, -probe_gauge ** 2])
    vals = np.abs(np.asarray(u.func(x, y, z)))
    if np.any(vals > 1e-12):
        raise ValueError("test function does not vanish near the origin")


def koranyi_hardy_defect(u: ScalarField, t_lo: float, t_hi: float,
                         nt: int = 96, ntheta: int = 24, nr: int = 64):
    """(energy, weighted mass) of u for the gauge-weight inequality.

    Both integrals run over the chart box [t_lo, t_hi] x [0, 2 pi) x
    (-2 pi, 2 pi) with the pushforward volume; t is sampled on a log scale
    so widely dilated profiles are resolved.  The gradient is assembled from
    central differences of u in ambient coordinates.  The support of u must
    avoid the origin and fit inside the chart box.
    """
    if not (0.0 < t_lo < t_hi):
        raise ValueError("need 0 < t_lo < t_hi")
    _reject_origin_overlap(u)
    lg, wl = gauss_legendre_on(math.log(t_lo), math.log(t_hi), nt)
    tg = np.exp(lg)
    wt = wl * tg
    th = _TWO_PI * np.arange(ntheta) / ntheta
    wth = np.full(ntheta, _TWO_PI / ntheta)
    rg, wr = gauss_legendre_on(-_TWO_PI, _TWO_PI, nr)

    T, TH, R = np.meshgrid(tg, th, rg, indexing="ij")
    vol = (wt[:, None, None] * wth[None, :, None] * wr[None, None, :]
           * T ** 3 * mu(rg)[None, None, :])
    X, Y, Z = _exp_map_arrays(T, TH, R)
    h = u.h
    g = u.func
    dux = (np.asarray(g(X + h, Y, Z)) - np.asarray(g(X - h, Y, Z))) / (2 * h)
    duy = (np.asarray(g(X, Y + h, Z)) - np.asarray(g(X, Y - h, Z))) / (2 * h)
    duz = (np.asarray(g(X, Y, Z + h)) - np.asarray(g(X, Y, Z - h))) / (2 * h)
    xu = dux - 0.5 * Y * duz
    yu = duy + 0.5 * X * duz
    energy = float(np.sum(vol * (np.abs(xu) ** 2 + np.abs(yu) ** 2)))
    uval = np.abs(np.asarray(g(X, Y, Z))) ** 2
    mass = float(np.sum(vol * uval * eta(rg)[None, None, :] / T ** 2))
    return energy, mass


def koranyi_hardy_check(testfns):
    """Inequality defects (energy minus weighted mass) for the given battery.

    `testfns` is a list of (label, ScalarField, t_lo, t_hi); every defect of
    a function supported away from the origin should be nonnegative up to
    quadrature noise.
    """
    out = []
    for label, u, t_lo, t_hi in testfns:
        energy, mass = koranyi_hardy_defect(u, t_lo, t_hi)
        out.append((label, energy - mass, energy, mass))
    return out


def _ln_gauge_bump(center, width, amplitude=1.0, modulation=None):
    def fn(x, y, z):
        n = koranyi_norm((x, y, z))
        s = (np.log(np.maximum(n, 1e-300)) - center) / width
        out = np.zeros_like(s)
        m = np.abs(s) < 1.0
        out[m] = np.exp(-1.0 / (1.0 - s[m] ** 2))
        out *= amplitude
        if modulation is not None:
            out = out * modulation(x, y, z, n)
        return out
    return ScalarField(fn)


def _sharpness_probe(log_width=6.0):
    # near-extremal profile: inverse gauge times a very wide log-scale bump;
    # the approach to the unit constant is logarithmic in the width
    def fn(x, y, z):
        n = koranyi_norm((x, y, z))
        s = np.log(np.maximum(n, 1e-300)) / log_width
        out = np.zeros_like(s)
        m = np.abs(s) < 1.0
        out[m] = np.exp(-1.0 / (1.0 - s[m] ** 2)) / n[m]
        return out
    return ScalarField(fn)


def _euclid_bump(center, width):
    def fn(x, y, z):
        rr = np.sqrt(x * x + y * y + z * z)
        s = (rr - center) / width
        out = np.zeros_like(s)
        m = np.abs(s) < 1.0
        out[m] = np.exp(-1.0 / (1.0 - s[m] ** 2))
        return out
    return ScalarField(fn)


def builtin_test_functions():
    """Battery of ten smooth test functions supported away from the origin.

    Each entry is (label, field, t_lo, t_hi); the chart box covers the
    support with margin (the distance is at most sqrt(pi) times the gauge).
    """
    ln2 = math.log(2.0)
    battery = [
        ("gauge_bump_unit", _ln_gauge_bump(0.0, ln2), 0.3, 4.0),
        ("gauge_bump_scaled", _ln_gauge_bump(0.0, ln2, amplitude=10.0), 0.3, 4.0),
        ("gauge_bump_inner", _ln_gauge_bump(-0.7, 0.5), 0.2, 2.0),
        ("gauge_bump_outer", _ln_gauge_bump(0.9, 0.8), 0.9, 10.0),
        ("gauge_bump_wide", _ln_gauge_bump(0.2, 1.4), 0.2, 9.0),
        ("angular_modulated", _ln_gauge_bump(
            0.0, ln2, modulation=lambda x, y, z, n: 1.0 + 0.5 * x / n), 0.3, 4.0),
        ("vertical_modulated", _ln_gauge_bump(
            0.0, ln2, modulation=lambda x, y, z, n: 1.0 + 0.4 * np.sin(z)), 0.3, 4.0),
        ("two_shell", ScalarField(lambda x, y, z:
            _ln_gauge_bump(-0.7, 0.5).func(x, y, z)
            + 0.6 * _ln_gauge_bump(0.9, 0.6).func(x, y, z)), 0.2, 8.0),
        ("euclidean_shell", _euclid_bump(1.5, 0.7), 0.4, 6.0),
        ("sharpness_probe", _sharpness_probe(6.0), 0.9 * math.exp(-6.0),
         1.1 * math.sqrt(math.pi) * math.exp(6.0)),
    ]
    return battery
