"""Numerical laboratory for harmonic analysis and sub-Riemannian geometry
on the first Heisenberg group."""

from .group import (GroupPoint, ORIGIN, ScalarField, apply_field,
                    apply_sublaplacian, dilate, fundamental_solution,
                    gamma_l2_blowup, gamma_pairing, group_inv, group_mul,
                    koranyi_norm)
from .hermite import (HermiteBasisSpec, derivative_matrix, hermite_eval,
                      oscillator_residual, position_matrix,
                      rescaled_hermite_eval)
from .transform import (QuadratureBox, SpectralCoefficients, SpectralGrid,
                        direct_l2_norm, forward_transform, inverse_transform,
                        plancherel_norm, rep_coefficient,
                        sublaplacian_multiplier)
from .deltaspec import (BandedSpectralOperator, DeficiencyCandidate,
                        MultiIndex, band_check, build_B, delta_coefficients,
                        deficiency_values, divergence_report,
                        identity_candidate, identity_candidate_partial_norm,
                        partial_norm)
from .geodesics import (GeodesicCoordinates, chart_coordinates,
                        distance_from_origin, exp_map, geodesic_horizontality,
                        gradient_frame, jacobian_det, koranyi_norm_in_chart,
                        mu, w_coeff)
from .hardy import (HardyReport, alpha_sweep, build_report,
                    builtin_test_functions, eta, gamma_alpha, hardy_ratio,
                    koranyi_hardy_check, quotient_for_alpha)
from .config import ConfigError, RunConfig

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
