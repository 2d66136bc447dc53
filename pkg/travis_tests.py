#!/usr/bin/env python
import sys
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    sys.exit(pytest.main(['HeraldedFock/testing/', '-q']))
