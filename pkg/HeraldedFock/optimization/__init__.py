# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

from .optimizer import Optimizer, OptNelderMead, OptLbfgs, choose_optimizer
