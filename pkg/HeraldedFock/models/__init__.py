# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

from .correlation import cross_correlation, auto_correlation, twin_beam_intensity, g_mode, gram_matrix, bunching_ratio
from .covariance import CovMatrix6, assemble_covariance
from .two_mode import conditional_number_distribution, two_mode_fidelity, two_mode_fidelity_via_wigner
from .wigner import WignerCoefficients, wigner_coefficients, fidelity_two_photon
from .fock import NPhotonState, GramSolution, permanent, fidelity_n, solve_coefficients
