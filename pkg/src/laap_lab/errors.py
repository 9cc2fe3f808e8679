"""Exception hierarchy shared by all laap_lab modules."""


class LaapLabError(Exception):
    """Base class for every error raised by laap_lab."""


class DomainError(LaapLabError, ValueError):
    """Argument outside the mathematical domain of a function (e.g. rho <= 0)."""


class UndefinedPointError(DomainError):
    """Evaluation at a point where the right-hand side is not defined."""


class RejectedInputError(LaapLabError, ValueError):
    """Input violates a documented precondition."""


class NoTwoShockError(LaapLabError):
    """The Riemann data do not admit a two-shock solution."""


class InfeasibleClosureError(LaapLabError):
    """No fan sub-solution satisfies the requested closure."""


class IntegrationDomainError(LaapLabError):
    """A numerical trajectory left the region where the ODE is defined."""


class InternalConsistencyError(LaapLabError):
    """A computed result failed one of its own post-condition checks."""


class CannotDominateError(RejectedInputError):
    """The zero profile has no strictly better refinement."""
