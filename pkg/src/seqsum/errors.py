"""Exception hierarchy shared by every module of the package."""


class SeqSumError(Exception):
    """Base class for all errors raised by seqsum."""


class ConfigurationError(SeqSumError, ValueError):
    """Invalid precision context or sweep configuration."""


class DomainError(SeqSumError, ValueError):
    """Argument outside the domain of validity of an operation."""


class CutError(DomainError):
    """Argument lies on the branch cut (-inf, 0]."""


class ParameterError(SeqSumError, ValueError):
    """Invalid parameters, e.g. a vanishing Pochhammer symbol in a denominator."""


class QuadratureError(SeqSumError, ArithmeticError):
    """Quadrature did not reach its target tolerance.

    Attributes
    ----------
    value : the last estimate of the integral
    estimate : the achieved relative error estimate
    """

    def __init__(self, message, value=None, estimate=None):
        super().__init__(message)
        self.value = value
        self.estimate = estimate


class BreakdownError(SeqSumError, ArithmeticError):
    """Vanishing denominator inside a recursive scheme (epsilon algorithm)."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class UnstableDenominatorError(BreakdownError):
    """Denominator sum of a Levin-type transformation cancelled to noise."""


class ZeroRemainderEstimateError(BreakdownError):
    """A remainder estimate omega_n = Delta s_n vanished."""


class DegenerateError(SeqSumError, ArithmeticError):
    """Degenerate rational approximant or vanishing closed-form denominator."""


class NonNormalError(DegenerateError):
    """Rational approximant with vanishing constant denominator term."""


class InsufficientDataError(SeqSumError, ValueError):
    """Too few usable data points for a fit."""
