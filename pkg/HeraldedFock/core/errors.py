# Copyright (c) 2026, the HeraldedFock Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

class HeraldedFockError(Exception):
    pass

class InvalidConfigError(HeraldedFockError):
    pass

class InvalidParameterError(InvalidConfigError, ValueError):
    pass

class GridError(HeraldedFockError, ValueError):
    pass

class GridTruncationError(GridError):
    pass

class NormalizationError(HeraldedFockError, ValueError):
    pass

class DegenerateConditioningError(HeraldedFockError, ArithmeticError):
    pass

class NumericalConvergenceError(HeraldedFockError):

    def __init__(self, message, diagnostics=None):
        super(NumericalConvergenceError, self).__init__(message)
        self.diagnostics = {} if diagnostics is None else diagnostics

class PairingLimitError(HeraldedFockError):
    pass

class PermanentSizeError(HeraldedFockError):
    pass

class NotNormallyOrderedError(HeraldedFockError, ValueError):
    pass
