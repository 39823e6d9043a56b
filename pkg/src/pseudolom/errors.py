"""Exception hierarchy shared by every module of the package."""


class PseudoLomError(Exception):
    """Base class for all errors raised by pseudolom."""


class NonConvergenceError(PseudoLomError):
    """Adaptive quadrature exhausted its refinement budget.

    ``worst`` holds the subinterval ``(lo, hi)`` with the largest
    remaining error estimate.
    """

    def __init__(self, message, worst=None):
        super().__init__(message)
        self.worst = worst


class BadBracketError(PseudoLomError):
    """The root-finding target lies outside the bracket image."""


class DiagonalStencilError(PseudoLomError):
    """No finite-difference step keeps the stencil off the diagonal."""


class DomainError(PseudoLomError, ValueError):
    """An argument or parameter lies outside its admissible domain."""


class InvalidSurvivalError(DomainError):
    """A univariate function is not a proper survival function."""


class InvalidGeneratorError(DomainError):
    """A generator fails the bijection or log-concavity requirements."""


class RateDomainError(DomainError):
    """Rates violate the admissible window of a bivariate construction."""


class OnDiagonalError(DomainError):
    """The absolutely continuous density was requested on ``x == y``."""


class InversionFailure(PseudoLomError):
    """Numeric inversion inside a sampler did not converge.

    ``draw`` is the offending uniform variate when known.
    """

    def __init__(self, message, draw=None):
        super().__init__(message)
        self.draw = draw


class NegativeConditionalError(PseudoLomError):
    """A conditional survival function is non-monotone (invalid model)."""


class NoRegularVariationError(PseudoLomError):
    """A generator corner limit h(t)/t**a did not stabilise."""


class UnstableLimitError(PseudoLomError):
    """A tail-dependence limit sequence did not settle."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
