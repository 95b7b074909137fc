"""Exception and warning types raised across the package."""


class ValidationError(ValueError):
    """Input has the wrong shape, sign, or structure."""


class ConfigurationError(ValueError):
    """A model or run configuration violates a required bound."""


class DegeneracyError(ArithmeticError):
    """Eigenvalues that must be simple are (numerically) repeated."""


class NumericalError(ArithmeticError):
    """A matrix that must be inverted is singular or ill-conditioned."""

    def __init__(self, message, condition_number=None):
        super().__init__(message)
        self.condition_number = condition_number


class DegeneracyWarning(RuntimeWarning):
    """Top eigenvalues are too close for their eigenvectors to be well defined."""
