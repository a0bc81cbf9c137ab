"""Exception hierarchy for maskquant."""


class MaskQuantError(Exception):
    """Base class for every error raised by this package."""


class NonConvergence(MaskQuantError):
    """An adaptive routine ran out of budget before meeting its tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DomainError(MaskQuantError, ValueError):
    pass


class BasisMismatch(MaskQuantError, ValueError):
    pass


class NotPassive(MaskQuantError, ValueError):
    """A coupling matrix has a singular value above one."""


class LabelCollision(MaskQuantError, ValueError):
    pass


class LabelMismatch(MaskQuantError, ValueError):
    pass


class UnknownLabel(MaskQuantError, KeyError):
    pass


class ZeroVector(MaskQuantError, ValueError):
    pass


class NonZeroMean(MaskQuantError, ValueError):
    pass


class CutoffExceeded(MaskQuantError, ValueError):
    pass
