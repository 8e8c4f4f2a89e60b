class McloopError(Exception):
    """Base class for errors raised by mcloop.

    Args:
        message (str): Human readable description.
        omega (float, optional): Angular frequency (rad/s) at which the error occurred.
    """
    def __init__(self, message: str, omega: float | None = None):
        super().__init__(message)
        self.omega = omega

    def __str__(self):
        message = super().__str__()
        if self.omega is not None:
            return f"{message} (omega={self.omega:.17g} rad/s)"
        return message


class InvalidParam(McloopError, ValueError):
    pass


class DimensionError(InvalidParam):
    pass


class InterconnectionError(InvalidParam):
    pass


class ConfigError(McloopError, ValueError):
    pass


class DenominatorUnderflow(McloopError, ArithmeticError):
    """Evaluation at (or numerically on top of) a pole of the undamped channel."""


class SingularResolvent(McloopError, ArithmeticError):
    """sI - A is singular: evaluation at a boundary-system pole."""


class FeedbackSingular(McloopError, ArithmeticError):
    """Algebraic loop: the feedback interconnection is not well-posed at s."""


class EvaluationError(McloopError, ArithmeticError):
    pass


class NoCrossing(McloopError):
    pass


class PropertyViolation(McloopError, AssertionError):
    def __init__(self, message: str, omega_tilde: float | None = None):
        super().__init__(message)
        self.omega_tilde = omega_tilde

    def __str__(self):
        message = super().__str__()
        if self.omega_tilde is not None:
            return f"{message} (omega_tilde={self.omega_tilde:.17g})"
        return message


class Unstable(McloopError, ArithmeticError):
    pass


class NotSettled(McloopError):
    pass
