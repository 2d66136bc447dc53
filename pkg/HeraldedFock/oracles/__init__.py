# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

from .wick import conditional_moment_lhs, conditional_moment_rhs, detector_splitting_check
