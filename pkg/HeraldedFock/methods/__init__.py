# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

from .mode_optimization import OptimizerSettings, ModeOptimizationResult, optimal_mode_zero_intensity, optimize_mode, \
    refine_on_grid
