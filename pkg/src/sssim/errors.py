"""Exception hierarchy.

Every error raised by the package derives from :class:`SSSimError`. The
``exit_code`` class attribute is what the command line maps each family to.
"""


class SSSimError(Exception):
    exit_code = 1


class ConfigError(SSSimError, ValueError):
    """Malformed, unknown or inconsistent configuration input."""

    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class UnknownMaterialError(ConfigError, KeyError):
    def __str__(self):
        return self.args[0]


class PhysicsError(SSSimError, ValueError):
    """A physical precondition of the device model is violated."""

    exit_code = 3


class BarrierCollapseError(PhysicsError):
    pass


class AboveBarrierError(PhysicsError):
    pass


class DomainError(PhysicsError):
    pass


class BranchViolationError(PhysicsError):
    def __init__(self, message, critical_current=None):
        self.critical_current = critical_current
        super().__init__(message)


class SteeringError(PhysicsError):
    pass


class NegativeBracketError(PhysicsError):
    pass


class NumericalError(SSSimError, ArithmeticError):
    exit_code = 4


class ConvergenceError(NumericalError):
    def __init__(self, message, value=None, error_estimate=None):
        self.value = value
        self.error_estimate = error_estimate
        super().__init__(message)


class NoBracketError(NumericalError):
    pass


class NonFiniteIntegrandError(NumericalError):
    def __init__(self, message, location=None):
        self.location = location
        super().__init__(message)
