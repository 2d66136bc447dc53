# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

from .config_parser import parser
from .driver import FockDriver
from .output import OutputEng
from .cli import main
