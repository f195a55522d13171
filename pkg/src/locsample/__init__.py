"""Generalized sampling with frequency-localizing prefilters.

Submodules
----------
prefilter
    Prefilter families, their spectra, autocorrelations, weights and moments.
spectrum
    Periodized spectra, Riesz bounds, dual and interpolating functions.
sampling
    Test signals, prefiltering, sampling, reconstruction and error measurement.
bounds
    Zeta-type series, the Chebyshev tail lemma and reconstruction error bounds.
cli
    The ``locsample`` command line tool.
"""

from . import bounds, prefilter, sampling, spectrum
from .errors import (
    BoundViolation,
    DivergentMoment,
    LocsampleError,
    PoleDetected,
    ResonantInterval,
    SymmetryViolation,
    TruncationBudgetExceeded,
    WrongFamily,
)
from .prefilter import BSplineCentered, BSplineNonCentered, Gaussian, Sinc
from .spectrum import Interpolator, interpolator

__all__ = [
    "bounds",
    "prefilter",
    "sampling",
    "spectrum",
    "Sinc",
    "Gaussian",
    "BSplineCentered",
    "BSplineNonCentered",
    "Interpolator",
    "interpolator",
    "LocsampleError",
    "DivergentMoment",
    "ResonantInterval",
    "PoleDetected",
    "SymmetryViolation",
    "TruncationBudgetExceeded",
    "WrongFamily",
    "BoundViolation",
]
