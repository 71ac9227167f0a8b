"""Exception types shared across the package."""


class ArisNomaError(Exception):
    """Base class for all package errors."""


class DomainError(ArisNomaError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DivergenceError(ArisNomaError, ArithmeticError):
    """A series/special-function evaluation does not converge.

    Raised by the Gauss-summed hypergeometric when its convergence
    condition fails; callers surface it as "asymptote unavailable".
    """


class ConfigError(ArisNomaError, ValueError):
    """Invalid configuration value or combination of values."""


class InfeasibleBudgetError(ConfigError):
    """A power budget cannot cover its static floors."""
