"""Quadrature rules shared across the package.

Everything here is deterministic: node/weight construction depends only on
the arguments, and integrals are plain weighted sums in index order.
"""

from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre


@lru_cache(maxsize=None)
def gauss_legendre(n):
    """Cached Gauss-Legendre rule on [-1, 1]."""
    x, w = roots_legendre(int(n))
    return x.copy(), w.copy()


def gauss_legendre_on(a, b, n):
    """Gauss-Legendre rule mapped to [a, b]."""
    x, w = gauss_legendre(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def composite_legendre(a, b, nodes, panel_order=64):
    """Composite Gauss-Legendre rule with roughly `nodes` points total.

    The interval is split into nodes // panel_order equal panels; for the
    analytic integrands used here each panel converges to machine precision,
    so doubling `nodes` probes pure quadrature self-consistency.  Requests
    below one panel degrade to a single low-order rule.
    """
    panel_order = min(int(panel_order), max(int(nodes), 2))
    panels = max(int(nodes) // panel_order, 1)
    edges = np.linspace(a, b, panels + 1)
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, w = gauss_legendre_on(lo, hi, panel_order)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def log_panel_rule(a, b, points_per_decade=64, panel_order=32):
    """Gauss-Legendre panels equally spaced in log scale on [a, b], 0 < a < b.

    Suited to integrands that vary on multiplicative scales (the node density
    follows d(log x)); weights are returned for integration in x itself.
    """
    if not (0.0 < a < b):
        raise ValueError("log_panel_rule requires 0 < a < b")
    la, lb = np.log(a), np.log(b)
    decades = (lb - la) / np.log(10.0)
    panels = max(int(np.ceil(decades * points_per_decade / panel_order)), 1)
    edges = np.linspace(la, lb, panels + 1)
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        u, wu = gauss_legendre_on(lo, hi, panel_order)
        x = np.exp(u)
        xs.append(x)
        ws.append(wu * x)  # dx = x d(log x)
    return np.concatenate(xs), np.concatenate(ws)


def box_rule(halfwidth, n):
    """1D Gauss-Legendre rule on [-halfwidth, halfwidth]."""
    return gauss_legendre_on(-halfwidth, halfwidth, n)


def koranyi_shell_rule(r_lo, r_hi, nr, nphi, npsi):
    """Quadrature over the Koranyi shell {r_lo < N(p) < r_hi}.

    Uses the polar-type map
        x = rho sqrt(sin phi) cos psi,
        y = rho sqrt(sin phi) sin psi,
        z = rho^2 cos(phi) / 4,
    with rho in (r_lo, r_hi), phi in (0, pi), psi in [0, 2 pi).  On these
    coordinates N = rho exactly and the volume element is rho^3/4, with no
    angular factor, so radially homogeneous integrands are resolved exactly
    up to the 1D radial rule.  The radial rule is logarithmic to handle
    integrands with 1/rho behaviour.

    Returns flattened arrays (x, y, z, w).
    """
    if not (0.0 < r_lo < r_hi):
        raise ValueError("koranyi_shell_rule requires 0 < r_lo < r_hi")
    u, wu = gauss_legendre_on(np.log(r_lo), np.log(r_hi), nr)
    rho = np.exp(u)
    wr = wu * rho
    phi, wphi = gauss_legendre_on(0.0, np.pi, nphi)
    psi = 2.0 * np.pi * np.arange(npsi) / npsi
    wpsi = np.full(npsi, 2.0 * np.pi / npsi)

    R, P, S = np.meshgrid(rho, phi, psi, indexing="ij")
    W = (wr[:, None, None] * wphi[None, :, None] * wpsi[None, None, :]
         * R ** 3 / 4.0)
    sq = np.sqrt(np.sin(P))
    x = R * sq * np.cos(S)
    y = R * sq * np.sin(S)
    z = R * R * np.cos(P) / 4.0
    return x.ravel(), y.ravel(), z.ravel(), W.ravel()
