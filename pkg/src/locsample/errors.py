"""Exception types raised by locsample."""


class LocsampleError(Exception):
    """Base class for all package errors."""


class DivergentMoment(LocsampleError, ValueError):
    """The weighted spectral moment of the prefilter is infinite."""


class ResonantInterval(LocsampleError, ArithmeticError):
    """The sampling interval sits at (or numerically on top of) a zero of the
    periodized spectrum, so the lower Riesz bound collapses."""


class PoleDetected(LocsampleError, ArithmeticError):
    """The signed periodization used by the V_lambda interpolator vanishes."""


class SymmetryViolation(LocsampleError, ArithmeticError):
    """An inverse transform that must be real left an imaginary residue."""


class TruncationBudgetExceeded(LocsampleError, RuntimeError):
    """The sample window is too narrow for the requested accuracy."""


class WrongFamily(LocsampleError, ValueError):
    """The operation is only defined for a different prefilter family."""


class BoundViolation(LocsampleError, AssertionError):
    """A numerically evaluated quantity exceeded its analytical bound."""
