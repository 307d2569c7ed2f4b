"""Exception types shared across the package."""


class SkeinError(Exception):
    """Base class for all package errors."""


class NotTriangulable(SkeinError, ValueError):
    pass


class ConventionError(SkeinError):
    """A locally built matrix failed a global consistency check."""


class NotASublattice(SkeinError, ValueError):
    pass


class NotBalanced(SkeinError, ValueError):
    pass


class NotInCone(SkeinError, ValueError):
    pass


class IncompatibleWeights(SkeinError, ValueError):
    pass


class BudgetExceeded(SkeinError):
    pass


class NotUnimodular(SkeinError, ValueError):
    pass


class ScalarModeMismatch(SkeinError, TypeError):
    pass


class OrderMismatch(SkeinError, ValueError):
    pass


class EdgeNotCuttable(SkeinError, ValueError):
    pass


class ZeroElement(SkeinError, ValueError):
    pass


class DivisibilityViolation(SkeinError):
    pass


class RankDeficient(SkeinError):
    pass


class InvalidNetwork(SkeinError, ValueError):
    pass
