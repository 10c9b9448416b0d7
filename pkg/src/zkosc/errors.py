"""Exception types raised across the package."""


class ZkoscError(Exception):
    """Base class for all package errors."""


class InvalidWindow(ZkoscError, ValueError):
    pass


class ZeroK(InvalidWindow):
    pass


class BadGradeIndex(ZkoscError, ValueError):
    pass


class NegativeStructure(ZkoscError, ValueError):
    pass


class IncompatibleRemainders(ZkoscError, ValueError):
    def __init__(self, message, s=None):
        super().__init__(message)
        self.s = s


class ZeroOmega(ZkoscError, ValueError):
    pass


class DomainViolation(ZkoscError, ValueError):
    pass


class ConvergenceFailure(ZkoscError, RuntimeError):
    pass


class CountTooLarge(ZkoscError, ValueError):
    pass


class GridMismatch(ZkoscError, ValueError):
    pass


class EmptyInput(ZkoscError, ValueError):
    pass


class ConfigParse(ZkoscError, ValueError):
    pass
