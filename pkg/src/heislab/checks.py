"""Cross-module invariant suite backing the `check` command."""

import math
from dataclasses import dataclass

import numpy as np

from . import deltaspec, geodesics, hardy, hermite
from .group import (GroupPoint, ScalarField, apply_field, apply_sublaplacian,
                    dilate, gamma_pairing, group_inv, group_mul, koranyi_norm)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _gaussian_field(h):
    return ScalarField(lambda x, y, z: np.exp(-(x * x + y * y + z * z)), h=h)


def _rand_points(rng, n, scale=2.0):
    pts = rng.uniform(-scale, scale, size=(n, 3))
    return [GroupPoint(*map(float, p)) for p in pts]


def run_all(cfg):
    """Run every invariant check; deterministic given (config, seed)."""
    rng = np.random.default_rng(cfg.seed)
    h = cfg.fd_step
    tol_fd = cfg.tolerances["fd_invariant"]
    results = []

    def record(name, passed, detail):
        results.append(CheckResult(name, bool(passed), detail))

    # group algebra -----------------------------------------------------
    worst = 0.0
    for _ in range(50):
        p, q, w = _rand_points(rng, 3)
        left = group_mul(group_mul(p, q), w).as_array()
        right = group_mul(p, group_mul(q, w)).as_array()
        worst = max(worst, float(np.max(np.abs(left - right))))
    record("group-associativity", worst < 1e-12, f"max dev {worst:.2e}")

    worst = 0.0
    for _ in range(50):
        p, q = _rand_points(rng, 2)
        lam = float(rng.uniform(0.2, 3.0))
        a = dilate(lam, group_mul(p, q)).as_array()
        b = group_mul(dilate(lam, p), dilate(lam, q)).as_array()
        worst = max(worst, float(np.max(np.abs(a - b))))
    record("dilation-homomorphism", worst < 1e-10, f"max dev {worst:.2e}")

    worst = 0.0
    for p in _rand_points(rng, 50):
        worst = max(worst, abs(koranyi_norm(p) - koranyi_norm(group_inv(p))))
    record("gauge-inverse-symmetry", worst < 1e-12, f"max dev {worst:.2e}")

    # finite-difference invariants (sensitive to fd_step) ----------------
    f = _gaussian_field(h)
    worst = 0.0
    for p in _rand_points(rng, 10, scale=1.2):
        xf = ScalarField(lambda x, y, z: _field_on_grid("X", f, x, y, z), h=h)
        yf = ScalarField(lambda x, y, z: _field_on_grid("Y", f, x, y, z), h=h)
        xy = apply_field("X", yf, p)
        yx = apply_field("Y", xf, p)
        zf = apply_field("Z", f, p)
        worst = max(worst, abs(xy - yx - zf))
    record("frame-commutator", worst < tol_fd, f"max residual {worst:.2e}")

    worst = 0.0
    for p in _rand_points(rng, 10, scale=1.2):
        direct = apply_sublaplacian(f, p)
        xf = ScalarField(lambda x, y, z: _field_on_grid("X", f, x, y, z), h=h)
        yf = ScalarField(lambda x, y, z: _field_on_grid("Y", f, x, y, z), h=h)
        composed = apply_field("X", xf, p) + apply_field("Y", yf, p)
        worst = max(worst, abs(direct - composed))
    record("sublaplacian-sum-of-squares", worst < tol_fd,
           f"max residual {worst:.2e}")

    gam = ScalarField(lambda x, y, z: 1.0 / (2.0 * np.pi * np.sqrt(
        (x * x + y * y) ** 2 + 16.0 * z * z)), h=h)
    worst = 0.0
    for p in _rand_points(rng, 12, scale=1.5):
        # rescale onto gauge range [1, 2.5] so derivative magnitudes are tame
        target = float(rng.uniform(1.0, 2.5))
        p = dilate(target / koranyi_norm(p), p)
        worst = max(worst, abs(apply_sublaplacian(gam, p)))
    record("kernel-harmonicity", worst < tol_fd, f"max residual {worst:.2e}")

    phi = _gaussian_field(h)
    pairing = gamma_pairing(phi, eps=0.05, r_max=8.0, nr=72, nphi=36, npsi=18)
    err = abs(pairing - 1.0)
    record("kernel-weak-identity", err < cfg.tolerances["weak_identity"],
           f"pairing error {err:.2e}")

    # Hermite machinery ---------------------------------------------------
    worst = 0.0
    for lam in (0.5, -1.0, 4.0):
        for n in (0, 3, 10, 20):
            worst = max(worst, hermite.oscillator_residual(n, lam))
    record("oscillator-eigenrelation", worst < 1e-9, f"max residual {worst:.2e}")

    worst = 0.0
    for lam in (0.7, -2.0):
        spec = hermite.HermiteBasisSpec(lam, 24)
        d = hermite.derivative_matrix(spec)
        m = hermite.position_matrix(spec)
        comm = (d @ m - m @ d)[:-1, :-1]
        worst = max(worst, float(np.max(np.abs(
            comm - abs(lam) * np.eye(23)))))
    record("ladder-commutation", worst < 1e-12, f"max dev {worst:.2e}")

    # banded spectral operators ------------------------------------------
    ok = True
    for a1 in range(4):
        for a2 in range(4):
            for a3 in range(3):
                if a1 + a2 + a3 == 0 or a1 + a2 + a3 > 6:
                    continue
                op = deltaspec.build_B(deltaspec.MultiIndex(a1, a2, a3), 32)
                ok = ok and deltaspec.band_check(op)
    record("band-property", ok, "all multi-indices within band")

    worst = 0.0
    for a2, a3 in ((2, 0), (3, 1), (1, 2)):
        n = 16
        whole = deltaspec.build_B(deltaspec.MultiIndex(0, a2, a3), n).entries
        m = n + a2 + a3
        step = deltaspec.build_B(deltaspec.MultiIndex(0, 1, 0), m).entries
        base = deltaspec.build_B(deltaspec.MultiIndex(0, 0, a3), m).entries
        prod = base
        for _ in range(a2):
            prod = step @ prod
        worst = max(worst, float(np.max(np.abs(prod[:n, :n] - whole))))
    record("operator-composition", worst < 1e-14, f"max dev {worst:.2e}")

    worst = 0.0
    for alpha in (deltaspec.MultiIndex(1, 1, 0), deltaspec.MultiIndex(0, 2, 1)):
        ref = deltaspec.build_B(alpha, 8).entries
        for lam in (0.5, 3.0, -2.0):
            scale = abs(lam) ** (alpha.band_width / 2.0) * lam ** alpha.a3
            for n in range(6):
                for m in range(6):
                    if ref[n, m] == 0:
                        continue
                    got = deltaspec.delta_coefficients(alpha, n, m, lam)
                    worst = max(worst, abs(got - scale * ref[n, m]))
    record("delta-homogeneity", worst < 1e-12, f"max dev {worst:.2e}")

    # geodesic chart ------------------------------------------------------
    worst = 0.0
    for _ in range(20):
        c = geodesics.GeodesicCoordinates(
            float(rng.uniform(0.3, 3.0)),
            float(rng.uniform(0.0, 2 * math.pi)),
            float(rng.uniform(-5.5, 5.5)))
        det = geodesics.jacobian_det(c, h=h)
        ref = c.t ** 3 * geodesics.mu(c.r)
        worst = max(worst, abs(det - ref) / abs(ref))
    record("jacobian-density", worst < 1e-5, f"max rel dev {worst:.2e}")

    worst = 0.0
    for _ in range(100):
        c = geodesics.GeodesicCoordinates(
            float(rng.uniform(0.1, 5.0)),
            float(rng.uniform(0.0, 2 * math.pi)),
            float(rng.choice([-1, 1]) * rng.uniform(1e-3, 2 * math.pi - 1e-3)))
        back = geodesics.chart_coordinates(geodesics.exp_map(c))
        dth = abs(back.theta - c.theta) % (2 * math.pi)
        dth = min(dth, 2 * math.pi - dth)
        worst = max(worst, abs(back.t - c.t), dth, abs(back.r - c.r))
    record("chart-roundtrip", worst < cfg.tolerances["roundtrip"],
           f"max dev {worst:.2e}")

    defect = geodesics.geodesic_horizontality(0.0, 1.0, 40, fd_step=h)
    record("geodesic-horizontality", defect < tol_fd, f"defect {defect:.2e}")

    # integrand landmarks and the gauge-weight inequality -----------------
    ok = (abs(hardy.eta(0.0) - 1.0) < 1e-12
          and abs(hardy.eta(2 * math.pi)) < 1e-12
          and abs(hardy.eta(-2 * math.pi)) < 1e-12)
    grid = np.linspace(0.0, 2 * math.pi, 10000)
    ok = ok and bool(np.all(np.diff(hardy.eta(grid)) < 0))
    for a in (-3.0, -2.0, -1.0):
        ok = ok and abs(hardy.gamma_alpha(a, 0.0) * geodesics.mu(0.0)
                        - 1.0 / 12.0) < 1e-9
    record("integrand-landmarks", ok, "eta and weight limits")

    battery = hardy.builtin_test_functions()[:2]
    floor = -cfg.tolerances["garofalo_floor"]
    defects = hardy.koranyi_hardy_check(
        [(lbl, ScalarField(u.func, h=min(h, 1e-4)), lo, hi)
         for lbl, u, lo, hi in battery])
    ok = all(d >= floor for _, d, _, _ in defects)
    record("gauge-weight-inequality", ok,
           "min defect {:.2e}".format(min(d for _, d, _, _ in defects)))

    return results


def _field_on_grid(which, f, x, y, z):
    """Vectorized frame-field application, used to nest derivatives."""
    hh = f.h
    if which == "X":
        return ((f.func(x + hh, y, z) - f.func(x - hh, y, z))
                - y * 0.5 * (f.func(x, y, z + hh) - f.func(x, y, z - hh))
                ) / (2.0 * hh)
    return ((f.func(x, y + hh, z) - f.func(x, y - hh, z))
            + x * 0.5 * (f.func(x, y, z + hh) - f.func(x, y, z - hh))
            ) / (2.0 * hh)
