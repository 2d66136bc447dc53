# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

from . import core
from . import util
from . import models
from . import methods
from . import optimization
from . import oracles
from . import interface

from .core import OpoParams, ClickTimes, TimeGrid, SampledModeFunction
from .__version__ import __version__
