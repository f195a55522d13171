"""Prefilter families, weight functions and their spectral moments.

Fourier convention throughout the package is the unitary one,

    f_hat(xi) = (2 pi)^(-1/2) * integral exp(-i x xi) f(x) dx,

so that Parseval holds without constants.  A prefilter ``phi`` acts on a
signal by crosscorrelation, and its autocorrelation ``Phi`` has spectrum
``sqrt(2 pi) |phi_hat|^2``.

Supported families
------------------
``Sinc(beta)``
    ``phi(x) = sinc(pi beta x)``; ideal low-pass on ``[-pi beta, pi beta]``.
``Gaussian(beta)``
    Normal density with standard deviation ``1/beta``.
``BSplineCentered(m)``
    Centered B-spline of order ``m`` (degree ``m - 1``).
``BSplineNonCentered(m)``
    The same spline supported on ``[0, m]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import integrate, special

from .errors import DivergentMoment

SQRT_2PI = math.sqrt(2.0 * math.pi)

#: absolute distance from 1/l under which a B-spline interval is resonant
TAU_ADM = 1e-9

#: relative accuracy requested from moment quadratures
TAU_MOM = 1e-10


# ---------------------------------------------------------------------------
# prefilter families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sinc:
    beta: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")


@dataclass(frozen=True)
class Gaussian:
    beta: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")


@dataclass(frozen=True)
class BSplineCentered:
    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise ValueError(f"spline order must be an integer >= 2, got {self.m}")


@dataclass(frozen=True)
class BSplineNonCentered:
    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise ValueError(f"spline order must be an integer >= 2, got {self.m}")


PrefilterSpec = Union[Sinc, Gaussian, BSplineCentered, BSplineNonCentered]
BSPLINES = (BSplineCentered, BSplineNonCentered)


def is_bspline(spec: PrefilterSpec) -> bool:
    return isinstance(spec, BSPLINES)


def is_centered(spec: PrefilterSpec) -> bool:
    """True when ``phi`` is even (every family except the non-centered spline)."""
    return not isinstance(spec, BSplineNonCentered)


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Monomial:
    """``w(xi) = |xi|^s``."""

    s: float

    def __post_init__(self):
        if not self.s > 1:
            raise ValueError(f"monomial weight needs s > 1, got {self.s}")


@dataclass(frozen=True)
class GaussExp:
    """``w(xi) = exp(a xi^2)``."""

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"Gaussian weight needs a > 0, got {self.a}")


@dataclass(frozen=True)
class SincScaled:
    """``w(xi) = s (pi beta)^(1-s) |xi|^(s-1)``, normalized so that the sinc
    prefilter of the same ``beta`` has moment ``1/beta`` for every ``s``."""

    s: float
    beta: float

    def __post_init__(self):
        if not self.s > 2:
            raise ValueError(f"scaled sinc weight needs s > 2, got {self.s}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")


WeightSpec = Union[Monomial, GaussExp, SincScaled]


def weight(w: WeightSpec, xi):
    """Evaluate ``w(|xi|)``."""
    xi = np.abs(np.asarray(xi, dtype=float))
    if isinstance(w, Monomial):
        return xi ** w.s
    if isinstance(w, GaussExp):
        return np.exp(w.a * xi * xi)
    if isinstance(w, SincScaled):
        return w.s * (math.pi * w.beta) ** (1.0 - w.s) * xi ** (w.s - 1.0)
    raise TypeError(f"unknown weight {w!r}")


# ---------------------------------------------------------------------------
# B-splines
# ---------------------------------------------------------------------------


def cardinal_bspline(order: int, t):
    """Cardinal B-spline ``N_order`` (support ``[0, order]``) at ``t``.

    Evaluated by the Cox-de Boor recurrence on integer knots, which is exact
    piecewise-polynomial arithmetic rather than a sampled convolution.
    """
    t = np.asarray(t, dtype=float)
    vals = [((t >= j) & (t < j + 1)).astype(float) for j in range(order)]
    for k in range(2, order + 1):
        vals = [
            ((t - j) * vals[j] + (k - (t - j)) * vals[j + 1]) / (k - 1)
            for j in range(order - k + 1)
        ]
    return vals[0]


def bspline(order: int, x):
    """Centered B-spline of the given order (``beta^{order-1}``), even in ``x``."""
    x = np.abs(np.asarray(x, dtype=float))
    return cardinal_bspline(order, x + 0.5 * order)


# ---------------------------------------------------------------------------
# time and frequency evaluation
# ---------------------------------------------------------------------------


def eval_time(spec: PrefilterSpec, x):
    """Prefilter function ``phi(x)``."""
    x = np.asarray(x, dtype=float)
    if isinstance(spec, Sinc):
        return np.sinc(spec.beta * x)
    if isinstance(spec, Gaussian):
        b = spec.beta
        return b / SQRT_2PI * np.exp(-0.5 * (b * x) ** 2)
    if isinstance(spec, BSplineCentered):
        return bspline(spec.m, x)
    if isinstance(spec, BSplineNonCentered):
        return cardinal_bspline(spec.m, x)
    raise TypeError(f"unknown prefilter {spec!r}")


def eval_freq(spec: PrefilterSpec, xi):
    """Fourier transform ``phi_hat(xi)`` as a complex array."""
    xi = np.asarray(xi, dtype=float)
    if isinstance(spec, Sinc):
        inside = np.abs(xi) <= math.pi * spec.beta
        return (inside / (SQRT_2PI * spec.beta)).astype(complex)
    if isinstance(spec, Gaussian):
        return (np.exp(-0.5 * (xi / spec.beta) ** 2) / SQRT_2PI).astype(complex)
    # np.sinc(xi / 2pi) = sin(xi/2) / (xi/2), with the limit 1 at xi = 0
    base = np.sinc(xi / (2.0 * math.pi)) ** spec.m / SQRT_2PI
    if isinstance(spec, BSplineCentered):
        return base.astype(complex)
    if isinstance(spec, BSplineNonCentered):
        return base * np.exp(-0.5j * spec.m * xi)
    raise TypeError(f"unknown prefilter {spec!r}")


def power(spec: PrefilterSpec, xi):
    """``|phi_hat(xi)|^2`` from the closed form (phase-free, so both spline
    variants give bitwise identical arrays)."""
    xi = np.asarray(xi, dtype=float)
    if isinstance(spec, Sinc):
        inside = np.abs(xi) <= math.pi * spec.beta
        return inside / (2.0 * math.pi * spec.beta**2)
    if isinstance(spec, Gaussian):
        return np.exp(-((xi / spec.beta) ** 2)) / (2.0 * math.pi)
    if is_bspline(spec):
        return np.sinc(xi / (2.0 * math.pi)) ** (2 * spec.m) / (2.0 * math.pi)
    raise TypeError(f"unknown prefilter {spec!r}")


def autocorr_freq(spec: PrefilterSpec, xi):
    """``Phi_hat(xi) = sqrt(2 pi) |phi_hat(xi)|^2``."""
    return SQRT_2PI * power(spec, xi)


def autocorr_time(spec: PrefilterSpec, x):
    """Autocorrelation ``Phi(x) = <phi, phi(. - x)>`` in closed form."""
    x = np.asarray(x, dtype=float)
    if isinstance(spec, Sinc):
        return np.sinc(spec.beta * x) / spec.beta
    if isinstance(spec, Gaussian):
        b = spec.beta
        return b / (2.0 * math.sqrt(math.pi)) * np.exp(-0.25 * (b * x) ** 2)
    if is_bspline(spec):
        return bspline(2 * spec.m, x)
    raise TypeError(f"unknown prefilter {spec!r}")


def norm_sq(spec: PrefilterSpec) -> float:
    """``||phi||^2 = Phi(0)``."""
    return float(autocorr_time(spec, 0.0))


def admissible(spec: PrefilterSpec, lam: float) -> bool:
    """Whether ``lam`` belongs to the family's set of admissible intervals.

    Sinc needs ``lam >= 1/beta``; Gaussians admit every positive ``lam``;
    B-splines exclude ``1/2, 1/3, 1/4, ...`` up to ``TAU_ADM``.
    """
    if not lam > 0:
        raise ValueError(f"sampling interval must be positive, got {lam}")
    if isinstance(spec, Sinc):
        return lam * spec.beta >= 1.0
    if isinstance(spec, Gaussian):
        return True
    return resonant_order(lam) is None


def resonant_order(lam: float) -> int | None:
    """The ``l >= 2`` with ``|lam - 1/l| <= TAU_ADM``, or None."""
    ell = round(1.0 / lam)
    if ell >= 2 and abs(lam - 1.0 / ell) <= TAU_ADM:
        return int(ell)
    return None


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------


def _spline_abs_moment(m: int, p: float) -> float:
    """``integral |xi|^p |phi_hat|^2`` for an order-``m`` spline, ``p < 2m-1``.

    The integral is split at ``X = 2 pi K``.  Beyond ``X`` the integrand is
    ``xi^(p-2m)`` times the finite cosine expansion of ``sin^(2m)(xi/2)``, so the
    constant term integrates in closed form and the oscillatory ones go to the
    Fourier-weight quadrature on the half line.
    """
    q = 2 * m
    periods = 4 * m
    head = 0.0
    f = lambda t: t**p * np.sinc(t / (2.0 * math.pi)) ** q  # noqa: E731
    for j in range(periods):
        val, _ = integrate.quad(
            f, 2 * math.pi * j, 2 * math.pi * (j + 1), epsabs=0.0, epsrel=1e-13, limit=200
        )
        head += val
    X = 2.0 * math.pi * periods
    tail = math.comb(q, m) * X ** (p - q + 1) / (q - 1 - p)
    g = lambda t: t ** (p - q)  # noqa: E731
    for j in range(1, m + 1):
        val, _ = integrate.quad(g, X, np.inf, weight="cos", wvar=j, epsabs=1e-15, limlst=100)
        tail += 2.0 * (-1) ** j * math.comb(q, m - j) * val
    return (head + tail) / math.pi


def abs_moment(spec: PrefilterSpec, p: float) -> float:
    """``integral |xi|^p |phi_hat(xi)|^2 dxi`` for ``p > -1``."""
    if isinstance(spec, Sinc):
        a = math.pi * spec.beta
        return a ** (p + 1) / ((p + 1) * math.pi * spec.beta**2)
    if isinstance(spec, Gaussian):
        return spec.beta ** (p + 1) * math.gamma(0.5 * (p + 1)) / (2.0 * math.pi)
    if p == 0:
        return norm_sq(spec)
    if p >= 2 * spec.m - 1:
        raise DivergentMoment(
            f"|xi|^{p} moment diverges for spline order {spec.m} (needs p < {2 * spec.m - 1})"
        )
    return _spline_abs_moment(spec.m, p)


def moment(spec: PrefilterSpec, w: WeightSpec) -> float:
    """Generalized moment ``M_w(phi) = integral w(|xi|) |phi_hat(xi)|^2 dxi``.

    Raises
    ------
    DivergentMoment
        If the integral is infinite for this prefilter/weight pair.
    """
    if isinstance(w, Monomial):
        return abs_moment(spec, w.s)
    if isinstance(w, SincScaled):
        scale = w.s * (math.pi * w.beta) ** (1.0 - w.s)
        return scale * abs_moment(spec, w.s - 1.0)
    if isinstance(w, GaussExp):
        if isinstance(spec, Sinc):
            X = math.pi * spec.beta
            ra = math.sqrt(w.a)
            integral = math.sqrt(math.pi) / (2.0 * ra) * special.erfi(ra * X)
            return float(integral / (math.pi * spec.beta**2))
        if isinstance(spec, Gaussian):
            rate = 1.0 / spec.beta**2 - w.a
            if rate <= 0:
                raise DivergentMoment(
                    f"exp({w.a} xi^2) grows at least as fast as the prefilter decays "
                    f"(needs a < 1/beta^2 = {1.0 / spec.beta**2})"
                )
            return math.sqrt(math.pi / rate) / (2.0 * math.pi)
        raise DivergentMoment("Gaussian weights are not integrable against spline spectra")
    raise TypeError(f"unknown weight {w!r}")


def mu_s(spec: PrefilterSpec, s: float) -> float:
    """``mu_s(phi) = (M_{|xi|^s}(phi) / ||phi||^2)^(1/s)``."""
    if not s > 1:
        raise ValueError(f"mu_s needs s > 1, got {s}")
    return (moment(spec, Monomial(s)) / norm_sq(spec)) ** (1.0 / s)


def soft_bandwidth(spec: PrefilterSpec) -> float:
    """Spectral standard deviation ``sigma(phi) = mu_2(phi)``."""
    return mu_s(spec, 2.0)
