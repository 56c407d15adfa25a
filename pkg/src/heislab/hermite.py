"""Hermite functions, their rescalings, and the associated ladder matrices."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class HermiteBasisSpec:
    """Frequency parameter and truncation for a rescaled Hermite basis."""

    lam: float
    truncation: int

    def __post_init__(self):
        if self.lam == 0.0:
            raise ValueError("frequency parameter must be nonzero")
        if self.truncation < 1:
            raise ValueError("truncation must be at least 1")


def hermite_table(n_max, xi):
    """Values H_n(xi) for n = 0..n_max-1, L2-normalized, shape xi.shape + (n_max,).

    Three-term recurrence on the normalized functions; no factorials appear,
    so the evaluation stays bounded for large n.
    """
    xi = np.asarray(xi, dtype=float)
    out = np.empty(xi.shape + (n_max,))
    h0 = np.pi ** -0.25 * np.exp(-0.5 * xi * xi)
    out[..., 0] = h0
    if n_max > 1:
        out[..., 1] = np.sqrt(2.0) * xi * h0
    for n in range(1, n_max - 1):
        out[..., n + 1] = (np.sqrt(2.0 / (n + 1)) * xi * out[..., n]
                           - np.sqrt(n / (n + 1.0)) * out[..., n - 1])
    return out


def hermite_eval(n, xi):
    """n-th L2-normalized Hermite function at xi (scalar or array)."""
    if n < 0:
        raise ValueError("Hermite index must be nonnegative")
    vals = hermite_table(n + 1, xi)[..., n]
    return vals if np.ndim(xi) else float(vals)


def rescaled_hermite_eval(n, lam, xi):
    """H_{n,lam}(xi) = |lam|^(1/4) H_n(|lam|^(1/2) xi); unit L2 norm for every lam."""
    if lam == 0.0:
        raise ValueError("frequency parameter must be nonzero")
    a = abs(lam)
    return a ** 0.25 * hermite_eval(n, a ** 0.5 * xi)


def position_matrix(spec: HermiteBasisSpec):
    """Matrix of multiplication by lam*xi on the rescaled basis.

    Tridiagonal, zero diagonal, entries |lam|^(1/2) sqrt(m/2) on the two
    off-diagonals (the stated entries are those of the lam > 0 branch of the
    recurrence and are used verbatim for either sign).
    """
    n = spec.truncation
    sq = abs(spec.lam) ** 0.5
    m = np.zeros((n, n))
    for k in range(n - 1):
        c = sq * np.sqrt((k + 1) / 2.0)
        m[k, k + 1] = c
        m[k + 1, k] = c
    return m


def derivative_matrix(spec: HermiteBasisSpec):
    """Matrix of d/dxi on the rescaled basis: antisymmetric tridiagonal."""
    n = spec.truncation
    sq = abs(spec.lam) ** 0.5
    m = np.zeros((n, n))
    for k in range(n - 1):
        c = sq * np.sqrt((k + 1) / 2.0)
        m[k, k + 1] = c
        m[k + 1, k] = -c
    return m


def oscillator_residual(n, lam, xi_samples=None):
    """Residual of the rescaled oscillator eigenrelation for mode n.

    (d^2/dxi^2 - lam^2 xi^2) H_{n,lam} = -(2n+1)|lam| H_{n,lam}; both
    derivatives are applied through the exact ladder matrices at a padded
    truncation so the mode of interest is untouched by the edge, and the
    residual function is sampled and normalized by max |H_{n,lam}|.
    """
    if n < 0:
        raise ValueError("mode index must be nonnegative")
    trunc = max(n + 3, 8)
    spec = HermiteBasisSpec(lam, trunc)
    d = derivative_matrix(spec)
    m = position_matrix(spec)
    e = np.zeros(trunc)
    e[n] = 1.0
    coeff = (d @ (d @ e)) - (m @ (m @ e)) + (2 * n + 1) * abs(lam) * e

    if xi_samples is None:
        half = (np.sqrt(2.0 * trunc + 1.0) + 2.0) / abs(lam) ** 0.5
        xi_samples = np.linspace(-half, half, 401)
    xi_samples = np.asarray(xi_samples, dtype=float)
    table = abs(lam) ** 0.25 * hermite_table(trunc, abs(lam) ** 0.5 * xi_samples)
    residual_fn = table @ coeff
    ref = np.max(np.abs(table[:, n]))
    return float(np.max(np.abs(residual_fn)) / ref)
