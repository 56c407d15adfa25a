"""Headless figure rendering for the report paths.

Every report command drops a PNG next to its delimited output.  Figures are
informational; the CSV/JSON files remain the machine-readable artifacts.
"""

import numpy as np

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .geodesics import mu  # noqa: E402
from .hardy import eta, gamma_alpha  # noqa: E402


def hardy_figure(report, path):
    r = np.linspace(-2 * np.pi, 2 * np.pi, 2001)
    plain = gamma_alpha(-2.0, r) * mu(r)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.2, 3.6))
    ax1.plot(r, plain, label="weight integrand")
    ax1.plot(r, plain * eta(r), label="energy integrand")
    ax1.set_xlabel("r")
    ax1.legend(frameon=False, fontsize=8)
    ax1.set_title(f"ratio = {report.ratio:.6f}", fontsize=10)
    if report.alpha_sweep:
        alphas = [a for a, _ in report.alpha_sweep]
        quots = [q for _, q in report.alpha_sweep]
        ax2.plot(alphas, quots, "o-", label="trial quotient")
        ax2.axhline(report.ratio, color="k", lw=0.8, ls="--", label="limit ratio")
        ax2.set_xlabel("alpha")
        ax2.legend(frameon=False, fontsize=8)
    ax2.set_title("trial-function sweep", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def plancherel_figure(rows, path):
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ns = [r["N"] for r in rows]
    defects = [r["relative_defect"] for r in rows]
    ax.semilogy(ns, defects, "o-")
    ax.set_xlabel("Hermite truncation")
    ax.set_ylabel("relative norm defect")
    ax.set_title("isometry convergence", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def divergence_figure(report, path):
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    cuts = [r[0] for r in report.rows]
    vals = [r[1] for r in report.rows]
    ax.semilogx(cuts, vals, "o-")
    ax.set_xlabel("frequency cutoff")
    ax.set_ylabel("partial squared norm")
    ax.set_title(f"fitted slope vs log cutoff: {report.fitted_slope:.5g}",
                 fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def geodesic_figure(rows, path):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.2, 3.6))
    for key in sorted({(r["theta0"], r["h0"]) for r in rows}):
        pts = [r for r in rows if (r["theta0"], r["h0"]) == key]
        ax1.plot([r["x"] for r in pts], [r["y"] for r in pts],
                 label=f"theta0={key[0]:.2f}, h0={key[1]:.2f}")
        ax2.plot([r["t"] for r in pts], [r["z"] for r in pts])
    ax1.set_xlabel("x")
    ax1.set_ylabel("y")
    ax1.set_aspect("equal", adjustable="datalim")
    ax1.legend(frameon=False, fontsize=7)
    ax2.set_xlabel("arclength t")
    ax2.set_ylabel("z")
    fig.suptitle("geodesic rays from the origin", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
