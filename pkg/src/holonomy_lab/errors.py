"""Exception hierarchy shared by all modules."""


class HolonomyLabError(Exception):
    """Base class for every error raised by holonomy_lab."""


class NonUnitDirection(HolonomyLabError, ValueError):
    pass


class NonPositiveRadius(HolonomyLabError, ValueError):
    pass


class SingularParametrization(HolonomyLabError, ValueError):
    """The raw curve has (numerically) vanishing speed somewhere."""


class TruncationFailure(HolonomyLabError, RuntimeError):
    """A Chebyshev re-fit did not reach the requested tolerance."""


class OutOfDomain(HolonomyLabError, ValueError):
    pass


class MVanishes(HolonomyLabError, ValueError):
    """|m| dropped below the floor; conjugate the frame first."""


class DegenerateConjugator(HolonomyLabError, ValueError):
    pass


class StepBudgetExceeded(HolonomyLabError, RuntimeError):
    pass


class ZeroC(HolonomyLabError, ValueError):
    pass


class DegenerateLine(HolonomyLabError, ValueError):
    pass


class NonPositiveC(HolonomyLabError, ValueError):
    pass


class GridTooCoarse(HolonomyLabError, ValueError):
    pass


class RangeTooShort(HolonomyLabError, ValueError):
    pass


class CurveSpecError(HolonomyLabError, ValueError):
    """A curve specification file could not be parsed."""


class ClassificationError(HolonomyLabError, RuntimeError):
    """A fitted constant-coefficient model failed validation."""
