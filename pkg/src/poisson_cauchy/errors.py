"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the region where a quantity is defined."""


class DivergenceError(DomainError):
    """An improper integral does not converge for the requested parameters."""


class CapabilityError(ValueError):
    """A test function cannot supply what was asked of it (derivative order, Lp membership)."""


class ConvergenceFailure(ArithmeticError):
    """Adaptive quadrature ran out of subdivisions before meeting its tolerance.

    The best estimate and its error estimate are kept on the exception so
    callers may still report them.
    """

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
