"""Exception hierarchy shared by every module."""


class AdlvError(Exception):
    """Base class for library errors"""


class InvalidRootSystemError(AdlvError, ValueError):
    """Unknown type label or invalid (type, rank) combination"""


class MixedRootSystemError(AdlvError, ValueError):
    """Operands belong to different root systems"""


class PreconditionError(AdlvError, ValueError):
    """An operation was called outside its documented domain"""


class NotationError(AdlvError, ValueError):
    """A word, translation or coordinate string could not be parsed"""


class GuardViolationError(AdlvError):
    """An exhaustive enumeration was requested above the configured rank guard"""


class InvariantViolationError(AdlvError, AssertionError):
    """A structural bound that the theory guarantees was exceeded at runtime"""
