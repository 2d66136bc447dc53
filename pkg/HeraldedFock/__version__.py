# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

__version__ = "0.1.0"
