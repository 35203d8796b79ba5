"""Two-use classical capacity of correlated Pauli channels."""

from .bell import apply_channel_computational, bell_to_computational, output_matrix
from .channel import (ACoefficients, ChannelParams, RegularizationRecord, a_coefficients,
                      channel_coefficients, joint_distribution, make_channel, regularize)
from .conditions import (ConditionReport, extremal_candidates, reduced_eigenvalues,
                         solvable_eigenvalues, solvable_threshold, sufficient_condition,
                         symmetric_threshold)
from .optimizer import (CapacityResult, OptimizerConfig, classify_extremal,
                        entanglement_enhanced, minimize_output_entropy, threshold_scan)
from .spectral import eigenvalues_hermitian4, majorizes, spread_pair, von_neumann_entropy

__version__ = "0.1.0"
