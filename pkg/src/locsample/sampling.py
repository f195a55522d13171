"""Prefiltering, lattice sampling, series reconstruction and error measures.

Signals are carried by their spectra on a :class:`~locsample.spectrum.FrequencyGrid`.
A prefiltered signal ``g = P_phi f`` has spectrum ``sqrt(2 pi) conj(phi_hat) f_hat``
and is evaluated in time by the trapezoid rule, which is spectrally accurate for
the smooth, rapidly decaying test spectra used here as long as the grid's
time-domain period ``2 pi / step`` exceeds the extent of the signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy import integrate

from . import prefilter as pf
from . import spectrum as sp
from .errors import TruncationBudgetExceeded

#: admissible relative size of the estimated series-truncation tail
TAU_TRUNC = 1e-8


# ---------------------------------------------------------------------------
# containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Spectrum:
    """Samples of a spectrum on a frequency grid."""

    grid: sp.FrequencyGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if np.shape(self.values) != (self.grid.count,):
            raise ValueError("spectrum length must equal the grid count")

    def __mul__(self, c) -> "Spectrum":
        return Spectrum(self.grid, c * self.values)

    __rmul__ = __mul__

    def __add__(self, other: "Spectrum") -> "Spectrum":
        if other.grid != self.grid:
            raise ValueError("spectra live on different grids")
        return Spectrum(self.grid, self.values + other.values)

    def energy(self) -> float:
        return float(sp.trapezoid(np.abs(self.values) ** 2, self.grid))


@dataclass(frozen=True)
class Signal:
    """Uniform time samples ``values[k] = s(t0 + k dt)``."""

    t0: float
    dt: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.values))


@dataclass(frozen=True)
class SampleSet:
    """Lattice samples ``g(n lam)`` for ``n_min <= n <= n_max``."""

    lam: float
    n_min: int
    n_max: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_max < self.n_min:
            raise ValueError("n_max must not be smaller than n_min")
        if len(self.values) != self.n_max - self.n_min + 1:
            raise ValueError("number of values must equal n_max - n_min + 1")

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    @property
    def positions(self) -> np.ndarray:
        return self.n * self.lam


# ---------------------------------------------------------------------------
# test signals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianBump:
    """``f_hat(xi) = amplitude * exp(-(xi - center)^2 / (2 width^2))``."""

    center: float = 0.0
    width: float = 1.0
    amplitude: complex = 1.0

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError("width must be positive")


@dataclass(frozen=True)
class TrigPolyEnvelope:
    """``f_hat(xi) = exp(-xi^2 / (2 width^2)) * sum_k c_k exp(-i k spacing xi)``.

    In time this is a train of Gaussian pulses of width ``1/width`` centred at
    ``k * spacing`` with amplitudes proportional to ``c_k`` (``k`` counts from
    ``-(len(c) - 1) // 2``).
    """

    coefficients: tuple = (1.0,)
    width: float = 1.0
    spacing: float = 1.0

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError("width must be positive")
        object.__setattr__(self, "coefficients", tuple(self.coefficients))


@dataclass(frozen=True)
class RandomSpectrum:
    """Seeded random superposition of time-shifted Gaussian spectral bumps.

    Bump centres are uniform in ``[-band, band]``, widths equal ``spread``,
    time shifts uniform in ``[-shift, shift]`` and amplitudes complex normal.
    """

    seed: int
    band: float = 10.0
    spread: float = 1.0
    bumps: int = 8
    shift: float = 1.0

    def __post_init__(self):
        if not (self.band >= 0 and self.spread > 0 and self.bumps >= 1 and self.shift >= 0):
            raise ValueError("invalid RandomSpectrum parameters")

    def _draw(self):
        rng = np.random.default_rng(self.seed)
        centers = rng.uniform(-self.band, self.band, self.bumps)
        shifts = rng.uniform(-self.shift, self.shift, self.bumps)
        amps = (rng.standard_normal(self.bumps) + 1j * rng.standard_normal(self.bumps)) / math.sqrt(2)
        return centers, shifts, amps


TestSignalSpec = Union[GaussianBump, TrigPolyEnvelope, RandomSpectrum]


def spectrum_values(spec: TestSignalSpec, xi) -> np.ndarray:
    """Closed-form ``f_hat(xi)`` of a test signal."""
    xi = np.asarray(xi, dtype=float)
    if isinstance(spec, GaussianBump):
        return spec.amplitude * np.exp(-0.5 * ((xi - spec.center) / spec.width) ** 2) + 0j
    if isinstance(spec, TrigPolyEnvelope):
        c = np.asarray(spec.coefficients, dtype=complex)
        k = np.arange(c.size) - (c.size - 1) // 2
        env = np.exp(-0.5 * (xi / spec.width) ** 2)
        return env * (np.exp(-1j * spec.spacing * np.multiply.outer(xi, k)) @ c)
    if isinstance(spec, RandomSpectrum):
        centers, shifts, amps = spec._draw()
        bumps = np.exp(-0.5 * ((np.subtract.outer(xi, centers)) / spec.spread) ** 2)
        return (bumps * np.exp(-1j * np.multiply.outer(xi, shifts))) @ amps
    raise TypeError(f"unknown test signal {spec!r}")


def frequency_reach(spec: TestSignalSpec) -> float:
    """Half width beyond which ``|f_hat|`` is below ``e^-60`` of its scale."""
    if isinstance(spec, GaussianBump):
        return abs(spec.center) + 11.0 * spec.width
    if isinstance(spec, TrigPolyEnvelope):
        return 11.0 * spec.width
    return spec.band + 11.0 * spec.spread


def time_reach(spec: TestSignalSpec) -> float:
    """Radius outside which the test signal is negligible in time."""
    if isinstance(spec, GaussianBump):
        return 9.0 / spec.width
    if isinstance(spec, TrigPolyEnvelope):
        n = len(spec.coefficients)
        return 9.0 / spec.width + spec.spacing * (n // 2 + 1)
    return 9.0 / spec.spread + spec.shift


def prefilter_reach(spec: pf.PrefilterSpec) -> float:
    """Radius outside which ``phi`` (and hence its smoothing) is negligible."""
    if isinstance(spec, pf.Gaussian):
        return 9.0 / spec.beta
    if isinstance(spec, pf.BSplineCentered):
        return 0.5 * spec.m
    if isinstance(spec, pf.BSplineNonCentered):
        return float(spec.m)
    return 0.0  # sinc smoothing does not widen a band-limited test signal


def signal_grid(spec: TestSignalSpec, span: float, max_step: float = 0.25) -> sp.FrequencyGrid:
    """Grid for a test signal whose prefiltered version is evaluated on ``|x| <= span``.

    The step keeps the trapezoid's time period ``2 pi / step`` above twice
    the span plus the signal's own extent.
    """
    step = min(max_step, 2.0 * math.pi / (2.0 * (span + time_reach(spec)) + 10.0))
    return sp.FrequencyGrid.with_step(frequency_reach(spec), step)


def synthesize(spec: TestSignalSpec, grid: sp.FrequencyGrid) -> Spectrum:
    """Spectrum of a test signal on ``grid`` (deterministic for seeded specs)."""
    return Spectrum(grid, spectrum_values(spec, grid.points))


def shift_combination(spec: pf.PrefilterSpec, lam: float, coefficients, n_min: int = 0):
    """``g = sum_n c_n Phi(. - n lam)`` as ``(g_callable, f_spectrum_callable)``.

    ``g`` lies in the closed span of the lattice shifts of ``Phi``; its pre-image
    ``f = sum_n c_n phi(. - n lam)`` is returned in frequency for norm
    computations.
    """
    c = np.asarray(coefficients, dtype=complex)
    n = n_min + np.arange(c.size)

    def g(x):
        x = np.asarray(x, dtype=float)
        return pf.autocorr_time(spec, np.subtract.outer(x, n * lam)) @ c

    def f_hat(xi):
        xi = np.asarray(xi, dtype=float)
        return pf.eval_freq(spec, xi) * (np.exp(-1j * lam * np.multiply.outer(xi, n)) @ c)

    return g, f_hat


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------


class PrefilteredSignal:
    """``g = P_phi f`` given by its spectrum; callable in time."""

    def __init__(self, spectrum: Spectrum):
        self.spectrum = spectrum
        self._weights = spectrum.grid.weights * spectrum.values

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        vals = sp.fourier_sum(np.atleast_1d(x).ravel(), self.spectrum.grid.points, self._weights)
        vals = vals / pf.SQRT_2PI
        return vals.reshape(x.shape) if x.ndim else complex(vals[0])


def prefilter_apply(f: Spectrum, spec: pf.PrefilterSpec) -> tuple:
    """Apply ``P_phi``: returns ``(g_spectrum, g_eval)``.

    ``g_hat = sqrt(2 pi) conj(phi_hat) f_hat`` and ``g_eval(x)`` integrates
    ``exp(i x xi) g_hat(xi) / sqrt(2 pi)`` by the trapezoid rule.
    """
    xi = f.grid.points
    g = Spectrum(f.grid, pf.SQRT_2PI * np.conj(pf.eval_freq(spec, xi)) * f.values)
    return g, PrefilteredSignal(g)


def sample(g_eval: Callable, lam: float, n_min: int, n_max: int) -> SampleSet:
    """Lattice samples ``g(n lam)``."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    n = np.arange(n_min, n_max + 1)
    values = np.asarray(g_eval(n * lam), dtype=complex).reshape(n.shape)
    return SampleSet(lam, int(n_min), int(n_max), values)


def _tail_estimate(samples: SampleSet, phi_int: Callable, xs: np.ndarray, edge: int = 3) -> float:
    """Relative size of the series terms beyond the sample range.

    The missing samples are assumed no larger than the largest of the outermost
    ``edge`` ones; they are weighted with ``|Phi_int|`` at the next 64 lattice
    points beyond each end as seen from the nearest evaluation point.
    """
    v = np.abs(samples.values)
    scale = v.max(initial=0.0)
    if scale == 0.0 or xs.size == 0:
        return 0.0
    lam = samples.lam
    j = np.arange(1, 65)
    right = np.abs(phi_int(xs.max() - (samples.n_max + j) * lam)).sum()
    left = np.abs(phi_int(xs.min() - (samples.n_min - j) * lam)).sum()
    return float(max(v[:edge].max() * left, v[-edge:].max() * right) / scale)


def reconstruct(samples: SampleSet, phi_int: Callable, xs, tau_trunc: float = TAU_TRUNC) -> np.ndarray:
    """Series reconstruction ``g_tilde(x) = sum_n g(n lam) Phi_int(x - n lam)``.

    ``phi_int`` may be any callable; objects with a ``synthesize`` method (see
    :class:`~locsample.spectrum.Interpolator`) use their fast route.

    Raises
    ------
    TruncationBudgetExceeded
        If the estimated contribution of samples outside the range exceeds
        ``tau_trunc`` relative to the largest sample.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    tail = _tail_estimate(samples, phi_int, xs)
    if tail > tau_trunc:
        raise TruncationBudgetExceeded(
            f"estimated truncation tail {tail:.3g} exceeds {tau_trunc:g}; widen the sample range"
        )
    synth = getattr(phi_int, "synthesize", None)
    if synth is not None:
        return synth(samples.n, samples.values, xs)
    kern = np.asarray(phi_int(np.subtract.outer(xs, samples.positions)))
    return kern @ samples.values


def project_Q(
    f: Spectrum,
    spec: pf.PrefilterSpec,
    lam: float,
    xs,
    *,
    limit_ell: int | None = None,
    tol: float = 1e-10,
    max_shifts: int = 4000,
) -> np.ndarray:
    """Projection ``(Q_lam f)(x) = integral Q(x, xi) f_hat(xi) conj(phi_hat(xi)) dxi``.

    The kernel ``Q(x, xi) = sum_k exp(i x (xi - k Lambda)) r(xi - k Lambda)``
    is built from the central fraction ``r`` on the signal's own grid, without
    sampling.  Because ``sum_k r(xi - k Lambda) = 1`` the mass left out by the
    truncation of ``k`` is known exactly; shifts are added until it is below
    ``tol`` relative to ``integral |f_hat phi_hat|``.

    With ``limit_ell`` the limit interpolator at ``lam = 1/limit_ell`` is used.

    The integrand has the time extent of ``Phi_int`` rather than of ``g``, so
    the grid of ``f`` must be fine enough that ``2 pi / step`` exceeds the
    decay length of ``Phi_int`` as well.

    Raises
    ------
    ResonantInterval
        If ``lam`` is resonant and no limit order is given.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    xi = f.grid.points
    h = f.values * np.conj(pf.eval_freq(spec, xi))
    w = f.grid.weights
    scale = float(np.sum(w * np.abs(h)))
    out = np.zeros(xs.shape, dtype=complex)
    if scale == 0.0:
        return out
    big = 2.0 * math.pi / lam

    if limit_ell is not None:
        ell = limit_ell

        def frac(eta):
            return np.asarray(sp.central_fraction(spec, 1.0, eta / ell))

    else:

        def frac(eta):
            return np.asarray(sp.central_fraction(spec, lam, eta))

    covered = np.zeros(xi.size)
    for step in range(max_shifts + 1):
        ks = (0,) if step == 0 else (step, -step)
        for k in ks:
            r = frac(xi - k * big)
            covered += r
            if np.any(r * np.abs(h) > 0):
                out += np.exp(-1j * k * big * xs) * sp.fourier_sum(xs, xi, w * r * h)
        missing = float(np.sum(w * np.abs(h) * np.clip(1.0 - covered, 0.0, None)))
        if missing <= tol * scale:
            break
    return out


def norm_phi(f: Spectrum, spec: pf.PrefilterSpec) -> float:
    """``||P_phi f||_phi = ||f_0||`` with ``f_0_hat = f_hat`` restricted to the
    support of ``phi_hat`` (the prefilter is an isometry there).

    For the sinc family the band edges generally fall between grid points; the
    band integral then uses the piecewise-linear interpolant of ``|f_hat|^2``
    cut exactly at ``+-pi beta``.
    """
    power = np.abs(f.values) ** 2
    if not isinstance(spec, pf.Sinc):
        return float(math.sqrt(sp.trapezoid(power, f.grid)))
    xi = f.grid.points
    edge = min(math.pi * spec.beta, f.grid.half_width)
    inside = np.abs(xi) < edge
    nodes = np.concatenate([[-edge], xi[inside], [edge]])
    vals = np.interp(nodes, xi, power)
    return float(math.sqrt(integrate.trapezoid(vals, nodes)))


@dataclass(frozen=True)
class ErrorRecord:
    sup_abs: float
    sup_rel: float
    per_point: np.ndarray = field(repr=False)


def measure_error(g_eval, g_tilde, xs, norm: float) -> ErrorRecord:
    """Pointwise error ``|g(x) - g_tilde(x)|`` and its maximum relative to ``norm``.

    ``g_eval`` may be a callable or an array of values at ``xs``.
    """
    if not norm > 0:
        raise ValueError("norm must be positive")
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    g = g_eval(xs) if callable(g_eval) else g_eval
    err = np.abs(np.asarray(g) - np.asarray(g_tilde))
    sup = float(err.max(initial=0.0))
    return ErrorRecord(sup, sup / norm, err)


def lattice_window(xs: Sequence[float], lam: float, margin: float) -> tuple:
    """Integer range ``(n_min, n_max)`` covering ``xs`` widened by ``margin``."""
    xs = np.asarray(xs, dtype=float)
    return (
        int(math.floor((xs.min() - margin) / lam)),
        int(math.ceil((xs.max() + margin) / lam)),
    )
