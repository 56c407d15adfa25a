"""Command-line interface: reproducible batch runs with file reports.

Exit codes: 0 success, 1 criterion failure, 2 usage or configuration error.
All CSV/JSON outputs are byte-identical across reruns of the same config.
"""

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import checks, deltaspec, geodesics, hardy, transform
from .config import ConfigError, RunConfig
from .group import ScalarField

FMT = "%.17g"


def _fmt(v):
    return FMT % v


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) if isinstance(v, float) else v
                             for v in row])


def _outdir(cfg):
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_hardy(cfg, args):
    report = hardy.build_report(
        nodes=cfg.r_nodes,
        convergence_tol=cfg.tolerances["hardy_convergence"])
    out = _outdir(cfg)
    (out / "hardy_report.json").write_text(report.to_json() + "\n")
    _write_csv(out / "alpha_sweep.csv", ["alpha", "quotient"],
               [(float(a), float(q)) for a, q in report.alpha_sweep])
    if cfg.figures:
        from . import figures
        figures.hardy_figure(report, out / "hardy_integrands.png")
    print(f"ratio = {report.ratio:.6f} (claimed bound {report.bound_claimed})")
    print(f"converged = {report.converged} (delta {report.convergence_delta:.3e})")
    ok = report.ratio <= cfg.tolerances["hardy_bound"] and report.ratio < 1.0
    return 0 if ok else 1


def _plancherel_ladder(cfg):
    top = cfg.truncation
    ladder = sorted({min(4, top), min(8, top), top})
    return [n for n in ladder if n >= 1]


def cmd_plancherel(cfg, args):
    if args.test_function == "zero":
        field = ScalarField(lambda x, y, z: np.zeros(np.broadcast(x, y, z).shape),
                            h=cfg.fd_step)
    else:
        field = ScalarField(lambda x, y, z: np.exp(-(x * x + y * y + z * z)),
                            h=cfg.fd_step)
    box = transform.QuadratureBox(cfg.box_halfwidth, cfg.box_points)
    direct = transform.direct_l2_norm(field, box)
    rows = []
    for n in _plancherel_ladder(cfg):
        grid = transform.SpectralGrid.geometric(
            n, cfg.lambda_min, cfg.lambda_max, cfg.lambda_nodes)
        coeff = transform.forward_transform(field, grid, box)
        spectral = transform.plancherel_norm(coeff)
        if direct == 0.0:
            defect = float("nan")
        else:
            defect = (direct ** 2 - spectral ** 2) / direct ** 2
        rows.append({"N": n, "lambda_nodes": len(grid.lambda_nodes),
                     "direct_norm": direct, "spectral_norm": spectral,
                     "relative_defect": defect})
    out = _outdir(cfg)
    _write_csv(out / "plancherel.csv",
               ["N", "lambda_nodes", "direct_norm", "spectral_norm",
                "relative_defect"],
               [(r["N"], r["lambda_nodes"], r["direct_norm"],
                 r["spectral_norm"], r["relative_defect"]) for r in rows])
    if cfg.figures and all(math.isfinite(r["relative_defect"]) for r in rows):
        from . import figures
        figures.plancherel_figure(rows, out / "plancherel.png")
    for r in rows:
        print(f"N={r['N']:3d} defect={r['relative_defect']:.5f}")
    defects = [r["relative_defect"] for r in rows]
    if any(math.isnan(d) for d in defects):
        return 1
    monotone = all(b < a for a, b in zip(defects, defects[1:]))
    ok = monotone and defects[-1] < cfg.tolerances["plancherel_defect"]
    return 0 if ok else 1


def _parse_candidate(doc, points_per_decade):
    coeffs = {}
    for key, val in doc.items():
        try:
            a1, a2, a3 = (int(s) for s in key.split(","))
            re_part, im_part = float(val[0]), float(val[1])
        except (ValueError, TypeError, IndexError) as exc:
            raise ConfigError(f"bad candidate entry {key!r}: {exc}") from exc
        try:
            coeffs[deltaspec.MultiIndex(a1, a2, a3)] = complex(re_part, im_part)
        except ValueError as exc:
            raise ConfigError(f"bad candidate entry {key!r}: {exc}") from exc
    widest = max((a.band_width for a, c in coeffs.items() if c != 0),
                 default=0)
    try:
        return deltaspec.DeficiencyCandidate(coeffs, truncation=widest + 1,
                                             points_per_decade=points_per_decade)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad candidate: {exc}") from exc


def cmd_deficiency(cfg, args):
    raw = getattr(cfg, "raw", {})
    if "candidate" in raw:
        cand = _parse_candidate(raw["candidate"], points_per_decade=64)
        default_candidate = set(raw["candidate"]) == {"0,0,0"}
    else:
        cand = deltaspec.identity_candidate(truncation=1)
        default_candidate = True
    lambda_lo = float(raw.get("lambda_lo", 1.0))
    cutoffs = [float(c) for c in raw.get("cutoffs", [1e1, 1e3, 1e5, 1e7, 1e9])]
    report = deltaspec.divergence_report(cand, cutoffs, lambda_lo)
    out = _outdir(cfg)
    _write_csv(out / "divergence.csv",
               ["lambda_hi", "partial_norm", "slope_estimate"],
               report.csv_rows())
    if cfg.figures:
        from . import figures
        figures.divergence_figure(report, out / "divergence.png")
    print(f"fitted slope = {report.fitted_slope:.6g}")
    if not report.fitted_slope > 0:
        return 1
    if default_candidate:
        oracle = 1.0 / (2.0 * math.pi) * sum(
            1.0 / (2 * n + 1) ** 2 for n in range(cand.truncation))
        rel = abs(report.fitted_slope - oracle) / oracle
        print(f"slope oracle = {oracle:.6g} (rel err {rel:.3e})")
        if rel > cfg.tolerances["slope_rel_err"]:
            return 1
    return 0


def cmd_delta_spectrum(cfg, args):
    try:
        a1, a2, a3 = (int(s) for s in args.alpha.split(","))
        alpha = deltaspec.MultiIndex(a1, a2, a3)
    except (ValueError, TypeError) as exc:
        print(f"bad multi-index {args.alpha!r}: {exc}", file=sys.stderr)
        return 2
    n = min(cfg.truncation, 16) if args.truncation is None else args.truncation
    try:
        op = deltaspec.build_B(alpha, n)
    except ValueError as exc:
        print(f"cannot build operator: {exc}", file=sys.stderr)
        return 2
    writer = csv.writer(sys.stdout)
    writer.writerow(["n", "m", "re", "im"])
    for i in range(n):
        for j in range(n):
            v = op.entries[i, j]
            writer.writerow([i, j, _fmt(v.real), _fmt(v.imag)])
    return 0


def cmd_geodesic(cfg, args):
    rays = [(0.0, 0.0), (0.0, 1.0), (math.pi / 4, -1.0), (math.pi / 2, 1.8)]
    ts = np.linspace(0.15, 3.0, 20)
    rows = []
    for theta0, h0 in rays:
        for t in ts:
            if abs(t * h0) >= 2 * math.pi:
                continue
            c = geodesics.GeodesicCoordinates(float(t), theta0, float(t * h0))
            p = geodesics.exp_map(c)
            delta = geodesics.distance_from_origin(p)
            rows.append({
                "theta0": theta0, "h0": h0, "t": float(t),
                "x": p.x, "y": p.y, "z": p.z,
                "delta": delta,
                "koranyi": float(geodesics.koranyi_norm_in_chart(t, t * h0)),
                "roundtrip_err": abs(delta - t),
            })
    out = _outdir(cfg)
    _write_csv(out / "geodesic_rays.csv",
               ["theta0", "h0", "t", "x", "y", "z", "delta", "koranyi",
                "roundtrip_err"],
               [(r["theta0"], r["h0"], r["t"], r["x"], r["y"], r["z"],
                 r["delta"], r["koranyi"], r["roundtrip_err"]) for r in rows])
    if cfg.figures:
        from . import figures
        figures.geodesic_figure(rows, out / "geodesic_rays.png")
    worst = max(r["roundtrip_err"] for r in rows)
    print(f"tabulated {len(rows)} points, worst distance defect {worst:.2e}")
    return 0 if worst < 1e-8 else 1


def cmd_check(cfg, args):
    results = checks.run_all(cfg)
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        status = "pass" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  {r.detail}")
        failed += 0 if r.passed else 1
    print(f"{len(results) - failed}/{len(results)} invariants hold")
    return 0 if failed == 0 else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="heislab",
        description="Numerical laboratory for the first Heisenberg group")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int, help="seed for randomized sweeps")
    common.add_argument("--r-nodes", type=int, dest="r_nodes",
                        help="holonomy quadrature nodes")
    common.add_argument("--truncation", type=int, default=None,
                        help="Hermite truncation")
    common.add_argument("--no-figures", action="store_true",
                        help="skip PNG rendering")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("hardy", parents=[common],
                       help="distance-weight constant estimate")
    p.set_defaults(handler=cmd_hardy)
    p = sub.add_parser("plancherel", parents=[common],
                       help="isometry convergence ladder")
    p.add_argument("--test-function", choices=("gaussian", "zero"),
                   default="gaussian")
    p.set_defaults(handler=cmd_plancherel)
    p = sub.add_parser("deficiency", parents=[common],
                       help="divergence of the deficiency candidate norm")
    p.set_defaults(handler=cmd_deficiency)
    p = sub.add_parser("delta-spectrum", parents=[common],
                       help="print the banded operator for one multi-index")
    p.add_argument("--alpha", default="0,1,0", help="multi-index a1,a2,a3")
    p.set_defaults(handler=cmd_delta_spectrum)
    p = sub.add_parser("geodesic", parents=[common],
                       help="tabulate chart points and distances along rays")
    p.set_defaults(handler=cmd_geodesic)
    p = sub.add_parser("check", parents=[common],
                       help="run the cross-module invariant suite")
    p.set_defaults(handler=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {
        "output_dir": args.out,
        "seed": args.seed,
        "r_nodes": args.r_nodes,
        "truncation": args.truncation,
    }
    if args.no_figures:
        overrides["figures"] = False
    try:
        cfg = RunConfig.load(args.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.handler(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
