"""Exception types shared across the package."""


class InvalidParams(ValueError):
    """Physical parameters outside their valid domain."""


class NotHermitian(ValueError):
    pass


class PoleError(ArithmeticError):
    """Evaluation at (or numerically on top of) a resolvent pole."""

    def __init__(self, message: str, magnitude: float = 0.0):
        super().__init__(message)
        self.magnitude = magnitude


class SingularMatrix(PoleError):
    """Matrix inversion failed; ``magnitude`` carries ``|det|``."""


class SingularDenominator(PoleError):
    """A closed-form expression hit a vanishing denominator."""


class ZeroSensitivity(ArithmeticError):
    """The measurement signal does not respond to the parameter at the nominal point."""


class UndefinedPhase(ArithmeticError):
    pass
