"""Exception hierarchy.

Two families matter to callers: ``InputError`` for malformed or inconsistent
data, and ``NumericalError`` for numerical failures. The CLI maps them to
exit codes 1 and 2 respectively.
"""


class WctError(Exception):
    """Base class for every error raised by this package."""


class InputError(WctError, ValueError):
    pass


class NumericalError(WctError, ArithmeticError):
    pass


class EmptySpace(InputError):
    pass


class NonPositiveWeight(InputError):
    pass


class LengthMismatch(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class AsymmetricGrid(InputError):
    pass


class NotBlockConstant(InputError):
    pass


class NonPositiveLambda(InputError):
    pass


class BadSchedule(InputError):
    pass


class ParseError(InputError):
    pass


class SchemaError(InputError):
    pass


class SpectrumHit(NumericalError):
    """The resolvent was requested at (or too near) a point of the spectrum."""


class ConvergenceFailure(NumericalError):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class SolveFailure(NumericalError):
    pass


class OracleSizeError(NumericalError):
    """The dense oracle refuses matrices above its size guardrail."""
