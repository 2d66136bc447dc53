#!/usr/bin/env python
# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import sys

from HeraldedFock.interface import main

if __name__ == '__main__':
    sys.exit(main())
