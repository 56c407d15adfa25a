"""Acceptance suite: every exit criterion at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one verdict line per
criterion.
"""

import json
import math
import time

import numpy as np

from heislab import (GeodesicCoordinates, GroupPoint, MultiIndex, ScalarField,
                     DeficiencyCandidate, build_B, chart_coordinates,
                     delta_coefficients, distance_from_origin,
                     divergence_report, eta, exp_map, gamma_alpha,
                     gamma_l2_blowup, gamma_pairing, geodesic_horizontality,
                     gradient_frame, identity_candidate,
                     identity_candidate_partial_norm, jacobian_det,
                     koranyi_hardy_check, mu, oscillator_residual,
                     partial_norm, rep_coefficient)
from heislab.cli import main as cli_main
from heislab.geodesics import _exp_map_arrays
from heislab.hardy import builtin_test_functions

TWO_PI = 2.0 * math.pi


def _report(num, name, ok, detail=""):
    verdict = "PASS" if ok else "FAIL"
    print(f"[acceptance] criterion {num} ({name}): {verdict}  {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def test_criterion_1_hardy_bound(tmp_path):
    t0 = time.perf_counter()
    code = cli_main(["hardy", "--out", str(tmp_path), "--r-nodes", "4096",
                     "--no-figures"])
    elapsed = time.perf_counter() - t0
    report = json.loads((tmp_path / "hardy_report.json").read_text())
    ok = (code == 0
          and report["ratio"] < 1.0
          and report["ratio"] <= 0.7985
          and report["converged"]
          and report["convergence_delta"] < 1e-8
          and elapsed < 5.0)
    _report(1, "hardy bound", ok,
            f"ratio={report['ratio']:.6f} delta={report['convergence_delta']:.2e} "
            f"runtime={elapsed:.2f}s")


def test_criterion_2_integrand_landmarks():
    ok = True
    details = []
    for a in (-3.0, -2.0, -1.0):
        v = gamma_alpha(a, 0.0) * mu(0.0)
        ok = ok and abs(v - 1.0 / 12.0) < 1e-9
    details.append("weight(0)=1/12")
    ok = ok and abs(eta(0.0) - 1.0) < 1e-12
    ok = ok and abs(eta(TWO_PI)) < 1e-12 and abs(eta(-TWO_PI)) < 1e-12
    grid = np.linspace(0.0, TWO_PI, 10000)
    ok = ok and bool(np.all(np.diff(eta(grid)) < 0))
    details.append("eta endpoints and monotonicity")
    _report(2, "integrand landmarks", ok, "; ".join(details))


def test_criterion_3_oscillator_eigenrelation():
    worst = 0.0
    for lam in (0.5, -0.5, 1.0, -1.0, 4.0, -4.0):
        for n in range(21):
            worst = max(worst, oscillator_residual(n, lam))
    _report(3, "oscillator eigenrelation", worst < 1e-9,
            f"max residual {worst:.2e}")


def test_criterion_4_plancherel_isometry(tmp_path):
    t0 = time.perf_counter()
    code = cli_main(["plancherel", "--out", str(tmp_path), "--no-figures"])
    elapsed = time.perf_counter() - t0
    lines = (tmp_path / "plancherel.csv").read_text().splitlines()
    defects = [float(line.split(",")[4]) for line in lines[1:]]
    monotone = all(b < a for a, b in zip(defects, defects[1:]))
    ok = (code == 0 and monotone and defects[-1] < 5e-2
          and elapsed < 600.0)
    _report(4, "plancherel isometry", ok,
            f"defects={['%.4f' % d for d in defects]} runtime={elapsed:.1f}s")


def test_criterion_5_banded_operators():
    ok = True
    sqh = math.sqrt(0.5)
    op = build_B(MultiIndex(0, 0, 1), 8)
    ok = ok and np.allclose(op.entries, -1j * np.eye(8), atol=0)
    op = build_B(MultiIndex(0, 1, 0), 8)
    ok = ok and op.entries[0, 1] == 1j * sqh and op.entries[1, 0] == 1j * sqh
    op = build_B(MultiIndex(1, 0, 0), 8)
    ok = ok and op.entries[0, 1] == sqh and op.entries[1, 0] == -sqh

    band_ok = True
    idx = np.arange(32)
    for a1 in range(7):
        for a2 in range(7):
            for a3 in range(7):
                if not 0 < a1 + a2 + a3 <= 6:
                    continue
                b = build_B(MultiIndex(a1, a2, a3), 32)
                outside = np.abs(idx[:, None] - idx[None, :]) > a1 + a2
                band_ok = band_ok and not np.any(b.entries[outside] != 0)
    ok = ok and band_ok

    comp_worst = 0.0
    for a2, a3 in ((2, 0), (3, 1), (4, 2)):
        n = 16
        whole = build_B(MultiIndex(0, a2, a3), n).entries
        m = n + a2 + a3
        prod = build_B(MultiIndex(0, 0, a3), m).entries
        step = build_B(MultiIndex(0, 1, 0), m).entries
        for _ in range(a2):
            prod = step @ prod
        comp_worst = max(comp_worst, float(np.max(np.abs(prod[:n, :n] - whole))))
    ok = ok and comp_worst < 1e-14

    h = 1e-3
    fd_worst = 0.0
    for lam in (1.0, 2.5):
        for alpha, axis in ((MultiIndex(1, 0, 0), 0),
                            (MultiIndex(0, 1, 0), 1),
                            (MultiIndex(0, 0, 1), 2)):
            for (n, m) in ((0, 0), (0, 1), (1, 0), (2, 1), (3, 3)):
                step = [0.0, 0.0, 0.0]
                step[axis] = h
                fd = (rep_coefficient(GroupPoint(-step[0], -step[1], -step[2]),
                                      n, m, lam)
                      - rep_coefficient(GroupPoint(*step), n, m, lam)) / (2 * h)
                fd_worst = max(fd_worst, abs(
                    fd - delta_coefficients(alpha, n, m, lam)))
    ok = ok and fd_worst < 10.0 * h * h
    _report(5, "banded operators", ok,
            f"composition dev {comp_worst:.1e}, fd dev {fd_worst:.1e}")


def test_criterion_6_deficiency_divergence():
    quad_ok = True
    for trunc in (1, 2):
        cand = identity_candidate(truncation=trunc)
        for lo, hi in ((1.0, 1e3), (0.5, 1e6)):
            quad = partial_norm(cand, lo, hi)
            oracle = identity_candidate_partial_norm(trunc, lo, hi)
            quad_ok = quad_ok and abs(quad - oracle) / oracle < 1e-8

    rep = divergence_report(identity_candidate(), [1e1, 1e3, 1e5, 1e7, 1e9])
    slope_target = 1.0 / (2.0 * math.pi)
    slope_ok = abs(rep.fitted_slope - slope_target) / slope_target < 0.05

    candidates = [
        identity_candidate(),
        DeficiencyCandidate({MultiIndex(0, 1, 0): 1.0}, truncation=3),
        DeficiencyCandidate({MultiIndex(1, 0, 0): 1.0,
                             MultiIndex(0, 0, 2): 0.5j}, truncation=3),
        DeficiencyCandidate({MultiIndex(0, 0, 0): 1.0,
                             MultiIndex(1, 1, 0): 1.0}, truncation=4),
    ]
    positive_ok = all(
        divergence_report(c, [1e1, 1e2, 1e3, 1e4]).fitted_slope > 0
        for c in candidates)
    ok = quad_ok and slope_ok and positive_ok
    _report(6, "deficiency divergence", ok,
            f"slope={rep.fitted_slope:.6f} target={slope_target:.6f}")


def test_criterion_7_geodesic_chart():
    rng = np.random.default_rng(101)
    worst_rt = 0.0
    for _ in range(300):
        t = float(rng.uniform(0.1, 5.0))
        th = float(rng.uniform(0.0, TWO_PI))
        r = float(rng.choice([-1, 1]) * rng.uniform(1e-3, TWO_PI - 1e-3))
        back = chart_coordinates(exp_map(GeodesicCoordinates(t, th, r)))
        dth = abs(back.theta - th) % TWO_PI
        dth = min(dth, TWO_PI - dth)
        worst_rt = max(worst_rt, abs(back.t - t), dth, abs(back.r - r))
    rt_ok = worst_rt < 1e-9

    axis_ok = abs(distance_from_origin(GroupPoint(0, 0, 1))
                  - 2.0 * math.sqrt(math.pi)) < 1e-6

    worst_jac = 0.0
    for _ in range(25):
        c = GeodesicCoordinates(float(rng.uniform(0.3, 3.0)),
                                float(rng.uniform(0.0, TWO_PI)),
                                float(rng.uniform(-6.0, 6.0)))
        ref = c.t ** 3 * mu(c.r)
        worst_jac = max(worst_jac, abs(jacobian_det(c) - ref) / abs(ref))
    jac_ok = worst_jac < 1e-6

    horiz = max(geodesic_horizontality(0.0, 1.0, 60, fd_step=1e-5),
                geodesic_horizontality(1.2, -1.4, 60, fd_step=1e-5))
    horiz_ok = horiz < 1e-6

    def push_norm(c):
        hstep = 1e-6
        cols = []
        for dt, dthh, dr in ((hstep, 0, 0), (0, hstep, 0), (0, 0, hstep)):
            plus = _exp_map_arrays(c.t + dt, c.theta + dthh, c.r + dr)
            minus = _exp_map_arrays(c.t - dt, c.theta - dthh, c.r - dr)
            cols.append([(float(a) - float(b)) / (2 * hstep)
                         for a, b in zip(plus, minus)])
        jac = np.array(cols).T
        radial, _ = gradient_frame(c)
        u = jac @ np.asarray(radial)
        return math.hypot(u[0], u[1])

    worst_push = 0.0
    for _ in range(20):
        c = GeodesicCoordinates(float(rng.uniform(0.3, 2.5)),
                                float(rng.uniform(0.0, TWO_PI)),
                                float(rng.choice([-1, 1])
                                      * rng.uniform(0.05, 6.0)))
        worst_push = max(worst_push, abs(push_norm(c) - 1.0))
    push_ok = worst_push < 1e-6

    ok = rt_ok and axis_ok and jac_ok and horiz_ok and push_ok
    _report(7, "geodesic chart", ok,
            f"roundtrip {worst_rt:.1e}, jacobian {worst_jac:.1e}, "
            f"horizontality {horiz:.1e}, gradient norm {worst_push:.1e}")


def test_criterion_8_fundamental_solution():
    phi = ScalarField(lambda x, y, z: np.exp(-(x * x + y * y + z * z)),
                      h=1e-4)
    errs = []
    for eps, n in ((0.2, 40), (0.1, 56), (0.05, 72)):
        val = gamma_pairing(phi, eps, r_max=8.0, nr=n, nphi=n // 2,
                            npsi=n // 4)
        errs.append(abs(val - 1.0))
    weak_ok = errs[0] > errs[1] > errs[2] and errs[2] < 1e-2

    eps = [0.2, 0.1, 0.05, 0.025, 0.0125]
    vals = gamma_l2_blowup(eps)
    incs = np.diff(vals)
    blowup_ok = bool(np.all(incs > 0)
                     and np.all(np.abs(incs / incs[0] - 1.0) < 0.1))
    ok = weak_ok and blowup_ok
    _report(8, "fundamental solution", ok,
            f"weak-identity errors {['%.1e' % e for e in errs]}, "
            f"increment spread {float(np.max(np.abs(incs / incs[0] - 1))):.2e}")


def test_criterion_9_gauge_weight_inequality():
    results = koranyi_hardy_check(builtin_test_functions())
    worst = min(d for _, d, _, _ in results)
    ok = len(results) == 10 and worst >= -1e-8
    _report(9, "gauge-weight inequality", ok,
            f"10 test functions, min defect {worst:.3e}")
