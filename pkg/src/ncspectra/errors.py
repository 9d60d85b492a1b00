"""Exception types shared across the solver modules."""


class NCSpectraError(Exception):
    """Base class for all library errors."""


class InvalidFamily(NCSpectraError):
    """Potential family does not match the requested operation."""


class NonConfining(NCSpectraError):
    """Even-power well requires a > 0 for a bound spectrum."""


class DegenerateDeformation(NCSpectraError):
    """The r^-6 coefficient vanishes; the closed-form machinery is inapplicable."""


class SingularAttraction(NCSpectraError):
    """Attractive r^-4 / r^-6 singularity: spectrum unbounded below ("fall to the center")."""


class ConstraintViolated(NCSpectraError):
    """Supplied parameters do not satisfy the truncation conditions."""


class UnsupportedDegree(NCSpectraError):
    """Moment equations are only available through polynomial degree 3."""


class NoRealSolution(NCSpectraError):
    """No Newton seed converged to a real solution of the constraint system."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class ComplexRoots(NCSpectraError):
    """Quadratic discriminant is negative."""

    def __init__(self, message, discriminant=None):
        super().__init__(message)
        self.discriminant = discriminant


class DivisionByZeroNu(NCSpectraError):
    """The expanded frequency formula divides by nu = 0 at nonzero theta."""


class NoBoundState(NCSpectraError):
    """No negative eigenvalue in range for a non-confining potential."""


class NotConverged(NCSpectraError):
    """Grid refinement did not converge."""

    def __init__(self, message, coarse=None, fine=None):
        super().__init__(message)
        self.coarse = coarse
        self.fine = fine


class OracleUnavailable(NCSpectraError):
    """Grid construction failed; no oracle verdict possible."""
