"""Exception types shared across the package."""


class InvalidStateError(ValueError):
    """Covariance data that does not describe a physical Gaussian state."""


class NumericalError(ArithmeticError):
    """A numerical routine failed or produced out-of-domain intermediate values."""
