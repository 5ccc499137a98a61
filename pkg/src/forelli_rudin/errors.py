"""Exception hierarchy shared by all modules.

Each class maps onto one CLI exit code.
"""


class ForelliRudinError(Exception):
    exit_code = 2


class ConfigError(ForelliRudinError, ValueError):
    """Malformed configuration. The message names the offending field."""

    exit_code = 1

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class DomainError(ForelliRudinError, ValueError):
    """A parameter lies outside the region where a quantity is defined."""

    exit_code = 2


class EvaluationError(DomainError):
    """An integrand produced a non-finite value."""


class AccuracyError(ForelliRudinError, ArithmeticError):
    """Quadrature refinement failed to reach the requested agreement."""

    exit_code = 3


class InfeasibleError(ForelliRudinError, ValueError):
    """An open interval required by a weight construction is empty."""

    exit_code = 4
