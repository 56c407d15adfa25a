"""Spectral side of point-mass derivatives and the deficiency diagnostic.

Derivatives of the point mass transform into banded ladder operators: one
diagonal factor -i per vertical derivative, and a raising/lowering
tridiagonal factor per horizontal derivative, all carrying homogeneity
|lam|^((a1+a2)/2) lam^a3.  Dividing by the resolvent multiplier
|lam|(2n+1) + i yields the candidate family whose squared spectral norm
diverges logarithmically in the frequency cutoff; `partial_norm` and
`divergence_report` quantify that divergence.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import log_panel_rule

MAX_MULTIINDEX_ORDER = 6

# lam-density used by the deficiency diagnostic, |lam| / (4 pi).  Only the
# growth rate of the partial norms matters for the divergence statement;
# this weight makes the identity-candidate slope exactly 1/(2 pi).
SPECTRAL_DENSITY = 1.0 / (4.0 * math.pi)


@dataclass(frozen=True)
class MultiIndex:
    """Derivative multi-index (a1, a2, a3) for (x, y, z)."""

    a1: int
    a2: int
    a3: int

    def __post_init__(self):
        if min(self.a1, self.a2, self.a3) < 0:
            raise ValueError("multi-index entries must be nonnegative")
        if self.order > MAX_MULTIINDEX_ORDER:
            raise ValueError(f"multi-index order capped at {MAX_MULTIINDEX_ORDER}")

    @property
    def order(self):
        return self.a1 + self.a2 + self.a3

    @property
    def band_width(self):
        return self.a1 + self.a2


@dataclass(frozen=True)
class BandedSpectralOperator:
    """lam-independent matrix part plus homogeneity exponents."""

    alpha: MultiIndex
    entries: np.ndarray
    abs_exponent: float
    sgn_exponent: int

    def __post_init__(self):
        if not np.any(self.entries):
            raise ValueError("operator must be nonzero")


def _raising_lowering(m, kind):
    """Tridiagonal ladder factor at truncation m.

    kind 'y': i (sqrt((n+1)/2) on the superdiagonal + sqrt(n/2) on the sub),
    kind 'x': the same magnitudes with signs +/- and no i.
    """
    a = np.zeros((m, m), dtype=complex)
    for n in range(m - 1):
        c = math.sqrt((n + 1) / 2.0)
        if kind == "y":
            a[n, n + 1] = 1j * c
            a[n + 1, n] = 1j * c
        else:
            a[n, n + 1] = c
            a[n + 1, n] = -c
    return a


def build_B(alpha: MultiIndex, n: int) -> BandedSpectralOperator:
    """Assemble the lam-independent operator for the multi-index.

    Factors compose as (x-factor)^a1 (y-factor)^a2 (-i)^a3 Id.  Tridiagonal
    products corrupt the outermost rows, so composition happens at truncation
    n + |alpha| and the result is cropped; the kept block is exact.
    """
    if n < alpha.band_width + 1:
        raise ValueError("truncation too small for the band of this index")
    m = n + alpha.order
    b = ((-1j) ** alpha.a3) * np.eye(m, dtype=complex)
    y = _raising_lowering(m, "y")
    x = _raising_lowering(m, "x")
    for _ in range(alpha.a2):
        b = y @ b
    for _ in range(alpha.a1):
        b = x @ b
    return BandedSpectralOperator(alpha=alpha, entries=b[:n, :n],
                                  abs_exponent=alpha.band_width / 2.0,
                                  sgn_exponent=alpha.a3)


def band_check(op: BandedSpectralOperator) -> bool:
    """True iff entries vanish exactly outside |n - m| <= a1 + a2 and the
    operator is nonzero inside."""
    n = op.entries.shape[0]
    idx = np.arange(n)
    outside = np.abs(idx[:, None] - idx[None, :]) > op.alpha.band_width
    if np.any(op.entries[outside] != 0):
        return False
    return bool(np.any(op.entries[~outside]))


def delta_coefficients(alpha: MultiIndex, n: int, m: int, lam: float,
                       truncation: int = None) -> complex:
    """Full lam-dependent coefficient |lam|^((a1+a2)/2) lam^a3 B(n, m)."""
    if lam == 0.0:
        raise ValueError("frequency must be nonzero")
    trunc = truncation if truncation is not None else max(n, m) + alpha.band_width + 1
    op = build_B(alpha, trunc)
    return (abs(lam) ** op.abs_exponent * lam ** op.sgn_exponent
            * op.entries[n, m])


@dataclass(frozen=True)
class DeficiencyCandidate:
    """Linear combination of point-mass derivatives on the spectral side."""

    coefficients: dict
    truncation: int
    points_per_decade: int = 64

    def __post_init__(self):
        if self.truncation < 1:
            raise ValueError("truncation must be at least 1")
        if not self.coefficients or all(c == 0 for c in self.coefficients.values()):
            raise ValueError("at least one coefficient must be nonzero")
        widest = 0
        for a, c in self.coefficients.items():
            if not isinstance(a, MultiIndex):
                raise TypeError("coefficient keys must be MultiIndex")
            if c != 0:
                widest = max(widest, a.band_width)
        if self.truncation < widest + 1:
            # otherwise every band entry falls outside the kept block
            raise ValueError("truncation must exceed the widest band")

    def numerator_matrices(self, n: int):
        """[(coefficient, operator)] with all operators at truncation n."""
        return [(c, build_B(a, n)) for a, c in self.coefficients.items()
                if c != 0]


def deficiency_values(cand: DeficiencyCandidate, n: int, m: int,
                      lam: float) -> complex:
    """Spectral value of the candidate at cell (n, m, lam):
    sum_alpha c_alpha |lam|^((a1+a2)/2) lam^a3 B_alpha(n, m)
    divided by |lam|(2n+1) + i."""
    if lam == 0.0:
        raise ValueError("frequency must be nonzero")
    trunc = max(n, m) + MAX_MULTIINDEX_ORDER + 1
    q = 0.0 + 0.0j
    for c, op in cand.numerator_matrices(trunc):
        q += c * abs(lam) ** op.abs_exponent * lam ** op.sgn_exponent \
            * op.entries[n, m]
    return q / (abs(lam) * (2 * n + 1) + 1j)


def _norm_density(cand: DeficiencyCandidate, lam):
    """sum_{n,m < N} |theta(n,m,lam)|^2 times the spectral density weight."""
    n_t = cand.truncation
    pieces = cand.numerator_matrices(n_t)
    lam = np.asarray(lam, dtype=float)
    q = np.zeros(lam.shape + (n_t, n_t), dtype=complex)
    for c, op in pieces:
        scale = np.abs(lam) ** op.abs_exponent * lam ** op.sgn_exponent
        q += scale[..., None, None] * (c * op.entries)[None, ...]
    denom = (np.abs(lam)[..., None] * (2 * np.arange(n_t) + 1)[None, :]) ** 2 + 1.0
    total = (np.abs(q) ** 2 / denom[..., :, None]).sum(axis=(-2, -1))
    return total * np.abs(lam) * SPECTRAL_DENSITY


def partial_norm(cand: DeficiencyCandidate, lambda_lo: float,
                 lambda_hi: float) -> float:
    """Squared spectral norm of the candidate over lambda_lo <= |lam| <= lambda_hi.

    Both frequency signs contribute; quadrature uses log-scaled panels whose
    resolution comes from the candidate.
    """
    if not lambda_lo > 0:
        raise ValueError("lambda_lo must be positive")
    if lambda_hi < lambda_lo:
        raise ValueError("lambda_hi must be at least lambda_lo")
    if lambda_hi == lambda_lo:
        return 0.0
    lam, w = log_panel_rule(lambda_lo, lambda_hi, cand.points_per_decade)
    return float(np.sum(w * (_norm_density(cand, lam)
                             + _norm_density(cand, -lam))))


def identity_candidate_partial_norm(truncation: int, lambda_lo: float,
                                    lambda_hi: float) -> float:
    """Closed form of partial_norm for the bare point-mass candidate.

    Antiderivative of lam/(lam^2 a^2 + 1) per diagonal mode a = 2n+1,
    summed over n < truncation; serves as the independent reference for the
    quadrature path.
    """
    total = 0.0
    for n in range(truncation):
        a2 = (2 * n + 1) ** 2
        total += (1.0 / (4.0 * math.pi * a2)) * math.log(
            (lambda_hi ** 2 * a2 + 1.0) / (lambda_lo ** 2 * a2 + 1.0))
    return total


@dataclass
class DivergenceReport:
    """Partial norms against growing cutoffs plus slope estimates."""

    lambda_lo: float
    rows: list = field(default_factory=list)  # (cutoff, partial_norm, slope)
    fitted_slope: float = float("nan")

    def csv_rows(self):
        return [(hi, pn, sl) for hi, pn, sl in self.rows]


def divergence_report(cand: DeficiencyCandidate, cutoffs,
                      lambda_lo: float = 1.0) -> DivergenceReport:
    """Tabulate partial norms at the given increasing cutoffs.

    The slope column is the increment against log cutoff between consecutive
    rows; `fitted_slope` is the least-squares slope over the last three rows
    and must come out positive for any admissible candidate.
    """
    cuts = [float(c) for c in cutoffs]
    if any(b <= a for a, b in zip(cuts, cuts[1:])) or not cuts:
        raise ValueError("cutoffs must be strictly increasing and nonempty")
    rows = []
    prev = None
    for hi in cuts:
        pn = partial_norm(cand, lambda_lo, hi)
        if prev is None:
            slope = float("nan")
        else:
            slope = (pn - prev[1]) / (math.log(hi) - math.log(prev[0]))
        rows.append((hi, pn, slope))
        prev = (hi, pn)
    tail = rows[-3:] if len(rows) >= 3 else rows
    xs = np.log([r[0] for r in tail])
    ys = np.array([r[1] for r in tail])
    if len(tail) >= 2:
        fitted = float(np.polyfit(xs, ys, 1)[0])
    else:
        fitted = float("nan")
    return DivergenceReport(lambda_lo=lambda_lo, rows=rows, fitted_slope=fitted)


def identity_candidate(truncation: int = 1,
                       points_per_decade: int = 64) -> DeficiencyCandidate:
    """The default candidate: unit mass on the bare point-mass index."""
    return DeficiencyCandidate({MultiIndex(0, 0, 0): 1.0 + 0.0j},
                               truncation, points_per_decade)
