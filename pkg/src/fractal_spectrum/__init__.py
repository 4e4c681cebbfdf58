"""Cuntz isometries, the scaling unitary ``U`` and its spectral measures on
the quarter-Cantor measure."""

__version__ = "0.1.0"

from .boundary import (CylinderReport, atom_scan, convexity_gap, cylinder_mass, cylinder_tree,
                       level_weight, weight_identity_check, zeros_path)
from .cuntz import (TruncOperator, alpha2, beta2, cuntz_identity_check, id1_residual,
                    p_e0_project, p_k_project, s0_adjoint, s0_apply, s1_adjoint, s1_apply,
                    shift_operator, wold_limit, wold_report, wold_sequence, word_adjoint, word_apply)
from .errors import (DegreeTooLarge, DepthMismatch, DepthTooLarge, FractalSpectrumError, NotInGamma,
                     ParseError, SupportNotInGamma, ToleranceUnreachable, ZeroVector)
from .fractal import (UMatrix, block_structure_check, m_apply, mu_compression, mu_pow_apply, mu_power,
                      relation_checks, u_adjoint, u_apply, u_apply_general, u_compression, u_matrix,
                      u_power)
from .gamma import (concat, enumerate_gamma, format_word, index_to_word, is_in_gamma, parse_word,
                    word_length, word_to_index)
from .parsing import load_vector, parse_vector
from .report import Report
from .spectral import (DensityEstimate, MeasureDecomposition, MomentSequence, TrigPoly,
                       cyclic_project, decompose_once, equal_measure_check,
                       exponential_measure_class, fejer_density, iterate_decomposition,
                       mu_moments, rn_estimate, transitivity_check, u_moments)
from .transform import DEFAULT_CONFIG, MuHatValue, TransformConfig, mu_hat_array, mu_hat_int, mu_hat_real
from .vectors import FreqVector, inner, norm, normalize, onb_coeffs, onb_coeffs_scaled
