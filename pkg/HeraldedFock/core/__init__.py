# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

from .params import OpoParams, ClickTimes, SqueezingParam
from .grid import TimeGrid, SampledModeFunction
from . import errors
