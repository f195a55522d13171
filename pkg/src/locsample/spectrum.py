"""Periodized spectra, Riesz bounds, dual and interpolating functions.

With ``Lambda = 2 pi / lam`` the central object is the periodization

    A(xi) = Lambda * sum_n |phi_hat(xi + n Lambda)|^2 ,

whose lower and upper bounds are the Riesz bounds of the shifted prefilter
family.  The interpolating function ``Phi_int`` is written through the
*central fraction*

    r(xi) = |phi_hat(xi)|^2 / sum_n |phi_hat(xi + n Lambda)|^2  in [0, 1],

as ``Phi_int_hat = (lam / sqrt(2 pi)) r``.  Working with ``r`` instead of the
raw quotient keeps every quantity bounded even when ``A`` is astronomically
small (Gaussian prefilters sampled far below their critical interval).

Numerical routes
----------------
* Sinc: the periodization is an exact overlap count.
* Gaussian: log-domain summation with a certified Gaussian tail.
* B-splines: the Poisson form ``A(xi) = sum_j Phi(j lam) exp(-i j lam xi)`` is a
  finite cosine sum, so no frequency truncation is needed.  Where it is small
  enough that double-precision cancellation could matter, the direct
  frequency sum is used if its algebraic tail certifies the result; very close
  to a resonance the cosine sum is re-evaluated in multiprecision instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np
from scipy import special

from . import prefilter as pf
from .errors import PoleDetected, ResonantInterval, SymmetryViolation, WrongFamily

#: absolute floor for denominators that are divided by directly
EPS_RIESZ = 1e-8
#: largest admissible imaginary residue of an inverse transform that must be real
TAU_SYM = 1e-8
#: default relative accuracy of periodized sums
TOL_FOLD = 1e-12
#: relative rounding level accepted from the spline cosine-sum form
TOL_POISSON = 1e-10

_LOG_2PI = math.log(2.0 * math.pi)
_CHUNK = 4_000_000  # array elements per block in chunked evaluations


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform symmetric grid ``xi_k = -half_width + k * step``, ``count`` odd."""

    half_width: float
    count: int

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.count < 3 or self.count % 2 == 0:
            raise ValueError("count must be an odd integer >= 3 so that 0 is a grid point")

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / (self.count - 1)

    @property
    def points(self) -> np.ndarray:
        k = np.arange(self.count) - (self.count - 1) // 2
        return k * self.step

    @property
    def weights(self) -> np.ndarray:
        """Composite trapezoid weights."""
        w = np.full(self.count, self.step)
        w[0] = w[-1] = 0.5 * self.step
        return w

    @classmethod
    def with_step(cls, half_width: float, max_step: float) -> "FrequencyGrid":
        """Smallest odd grid on ``[-half_width, half_width]`` with step <= max_step."""
        intervals = math.ceil(2.0 * half_width / max_step)
        intervals += intervals % 2
        return cls(half_width, intervals + 1)

    @classmethod
    def default_for(cls, spec: pf.PrefilterSpec, lam: float) -> "FrequencyGrid":
        """Grid resolving ``Phi_int_hat`` for the given prefilter and interval.

        Sinc uses the band edge ``pi beta``.  For Gaussians the half width
        covers both ``10 beta`` and the region ``Lambda/2 + 25 beta^2/Lambda``
        beyond which the central fraction is below ``e^-50``; the step also
        keeps the trapezoid's time-domain period well outside the decay length
        of ``Phi_int``.  For splines see :func:`_spline_quadrature_grid`.
        """
        big = 2.0 * math.pi / lam
        step = min(0.01, big / 200.0)
        if isinstance(spec, pf.Sinc):
            half = math.pi * spec.beta
        elif isinstance(spec, pf.Gaussian):
            b = spec.beta
            half = max(10.0 * b, 0.5 * big + 25.0 * b * b / big)
            decay = b * b * lam / 4.0
            step = min(step, 2.0 * math.pi / (40.0 / decay + 60.0))
        else:
            return _spline_quadrature_grid(spec, lam, step)
        return cls.with_step(half, step)


#: central-fraction mass accepted beyond the half width of a spline quadrature grid
TOL_SPLINE_TAIL = 1e-9


def _spline_quadrature_grid(
    spec: pf.PrefilterSpec, lam: float, step: float, max_points: int = 1 << 20
) -> FrequencyGrid:
    """Trapezoid grid for the spline ``Phi_int_hat`` near or away from resonance.

    With ``d = 1/lam - round(1/lam)`` the two shifts closest to a common zero
    of ``phi_hat`` differ by ``2 pi d``; the central fraction then has poles at
    imaginary distance ``a = pi |d| tan(pi / (4m))`` from the real axis, so
    ``Phi_int`` decays like ``exp(-a |x|)``.  The step keeps the trapezoid's
    time period ``2 pi / step`` above ``34 / a + 60``.  The half width starts at
    ``max(40 pi, 4 pi / lam)`` and doubles while the central fraction still
    holds more than ``TOL_SPLINE_TAIL`` of mass in the next band; close to a
    resonance it has bumps near ``2 pi j`` far beyond the first period.  The
    grid never exceeds ``max_points``; the step is coarsened first.
    """
    d = abs(1.0 / lam - round(1.0 / lam))
    if d > 0.0:
        a = math.pi * d * math.tan(math.pi / (4.0 * spec.m))
        step = min(step, 2.0 * math.pi / (34.0 / a + 60.0))
    half = max(40.0 * math.pi, 4.0 * math.pi / lam)
    step = max(step, 2.0 * half / (max_points - 1))
    while 4.0 * half / step < max_points:
        band = FrequencyGrid.with_step(half, step)
        outer = band.points[band.points >= 0.0] + half
        mass = float(np.sum(central_fraction(spec, lam, outer))) * band.step
        if mass <= TOL_SPLINE_TAIL:
            break
        half *= 2.0
    return FrequencyGrid.with_step(half, step)


def trapezoid(values, grid: FrequencyGrid, axis: int = -1):
    """Composite trapezoid rule of samples on ``grid``."""
    return np.tensordot(np.asarray(values), grid.weights, axes=([axis], [0]))


def fourier_sum(xs, xi, coeffs) -> np.ndarray:
    """``sum_k coeffs[k] exp(i x xi_k)`` for every ``x`` in ``xs``, in blocks."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    xi = np.asarray(xi, dtype=float)
    coeffs = np.asarray(coeffs, dtype=complex)
    out = np.empty(xs.shape, dtype=complex)
    block = max(1, _CHUNK // max(1, xi.size))
    for start in range(0, xs.size, block):
        sl = slice(start, start + block)
        out[sl] = np.exp(1j * np.outer(xs[sl], xi)) @ coeffs
    return out


# ---------------------------------------------------------------------------
# periodized sums
# ---------------------------------------------------------------------------


def _reduce(xi, big: float) -> np.ndarray:
    """Map ``xi`` into the fundamental period ``[-big/2, big/2]``."""
    xi = np.asarray(xi, dtype=float)
    return xi - big * np.round(xi / big)


def _log_power(spec: pf.PrefilterSpec, xi) -> np.ndarray:
    """``log |phi_hat(xi)|^2`` (``-inf`` at zeros)."""
    xi = np.asarray(xi, dtype=float)
    if isinstance(spec, pf.Gaussian):
        return -((xi / spec.beta) ** 2) - _LOG_2PI
    with np.errstate(divide="ignore"):
        return np.log(pf.power(spec, xi))


@dataclass(frozen=True)
class _Fold:
    """``log sum_n |phi_hat(xi + n Lambda)|^2`` with truncation bookkeeping."""

    log_sum: np.ndarray
    terms: int
    remainder: float  # absolute bound on the dropped part of Lambda * sum


def _gauss_terms(beta: float, big: float, tol: float) -> int:
    # smallest kept term at reduced xi is >= exp(-(big/2)^2/beta^2)/(2 pi)
    reach = math.sqrt((0.5 * big) ** 2 + beta * beta * (math.log(1.0 / tol) + 1.0))
    return max(1, math.ceil(0.5 + reach / big))


def _gauss_remainder(beta: float, big: float, n: int) -> float:
    r = (n + 0.5) * big
    return big / math.pi * math.exp(-((r / beta) ** 2)) / (-math.expm1(-2.0 * r * big / beta**2))


def _fold_gauss(spec: pf.Gaussian, lam: float, xr: np.ndarray, tol: float) -> _Fold:
    big = 2.0 * math.pi / lam
    n_per = _gauss_terms(spec.beta, big, tol)
    n = np.arange(-n_per, n_per + 1)[:, None]
    logs = special.logsumexp(-(((xr[None, :] + n * big) / spec.beta) ** 2), axis=0) - _LOG_2PI
    return _Fold(logs, n_per, _gauss_remainder(spec.beta, big, n_per))


def _sinc_count(beta: float, big: float, xr: np.ndarray) -> np.ndarray:
    edge = math.pi * beta
    hi = np.floor((edge - xr) / big)
    lo = np.ceil((-edge - xr) / big)
    return np.maximum(hi - lo + 1.0, 0.0)


def _fold_sinc(spec: pf.Sinc, lam: float, xr: np.ndarray) -> _Fold:
    big = 2.0 * math.pi / lam
    count = _sinc_count(spec.beta, big, xr)
    with np.errstate(divide="ignore"):
        logs = np.log(count) - math.log(2.0 * math.pi * spec.beta**2)
    return _Fold(logs, math.ceil((math.pi * spec.beta + 0.5 * big) / big), 0.0)


def _cardinal_bspline_mp(order: int, t):
    """Scalar Cox-de Boor recurrence in mpmath arithmetic."""
    vals = [mpmath.mpf(1) if j <= t < j + 1 else mpmath.mpf(0) for j in range(order)]
    for k in range(2, order + 1):
        vals = [
            ((t - j) * vals[j] + (k - (t - j)) * vals[j + 1]) / (k - 1)
            for j in range(order - k + 1)
        ]
    return vals[0]


def _spline_poisson_mp(m: int, lam: float, xr: np.ndarray, rel_tol: float) -> np.ndarray:
    """Cosine-sum form of ``A`` in multiprecision at the points ``xr``.

    The sum has only ``O(m/lam)`` terms but cancels catastrophically near the
    zeros of ``A``.  Inputs are binary floats and therefore exact, so raising
    the working precision until the result is resolved to ``rel_tol`` gives the
    value of ``A`` at exactly these points.
    """
    order = 2 * m
    digits = -math.log10(rel_tol)
    out = np.empty(xr.size)
    dps = 40
    pending = np.arange(xr.size)
    while pending.size:
        with mpmath.workdps(dps):
            lam_mp = mpmath.mpf(lam)
            j_max = math.ceil(m / lam)
            b = [_cardinal_bspline_mp(order, abs(j * lam_mp) + mpmath.mpf(m)) for j in range(j_max + 1)]
            retry = []
            for i in pending:
                x = mpmath.mpf(float(xr[i]))
                total = b[0] + 2 * mpmath.fsum(b[j] * mpmath.cos(j * lam_mp * x) for j in range(1, j_max + 1))
                # b[0] bounds the size of the summands, so this is the digit loss
                if total > 0 and mpmath.log10(b[0] / total) + digits + 5 < dps:
                    out[i] = float(total)
                else:
                    retry.append(i)
        pending = np.asarray(retry, dtype=int)
        dps *= 2
        if dps > 2000:
            raise ResonantInterval(f"periodized spectrum numerically zero at lam={lam!r}")
    return out


def _spline_tail(m: int, big: float, n: int) -> float:
    """Bound on ``sum_{|k| > n} |phi_hat(xi + k Lambda)|^2`` for reduced xi."""
    q = 2 * m
    return (2.0 / big) ** q * (n - 0.5) ** (1 - q) / (math.pi * (q - 1))


def _spline_direct(m: int, lam: float, xr: np.ndarray, tol: float, max_terms: int) -> tuple:
    """Direct frequency-domain sum of spline power shifts at reduced points.

    The phase ``(xi + n Lambda)/2`` is split as ``xi/2 + n pi l + n pi d`` with
    ``l`` the integer nearest ``1/lam``; the ``n pi l`` part only flips the sign
    of the sine, which the even power discards, so ``sin`` never sees large
    arguments.  Returns ``(sums, converged)`` where ``converged`` marks points
    whose algebraic tail after ``max_terms`` shifts is below ``tol`` relative.
    """
    big = 2.0 * math.pi / lam
    d = 1.0 / lam - round(1.0 / lam)
    q = 2 * m

    def shifts(x, lo, hi):
        ns = np.arange(lo, hi + 1, dtype=float)[:, None]
        acc = np.zeros(x.size)
        block = max(1, _CHUNK // ns.size)
        for start in range(0, x.size, block):
            xb = x[None, start : start + block]
            for sgn in (1.0, -1.0):
                s = np.sin(0.5 * xb + sgn * ns * (math.pi * d))
                acc[start : start + block] += np.sum((s / (0.5 * (xb + sgn * ns * big))) ** q, axis=0)
        return acc

    with np.errstate(divide="ignore", invalid="ignore"):
        total = np.where(xr == 0.0, 1.0, (np.sin(0.5 * xr) / (0.5 * xr)) ** q)
    active = np.arange(xr.size)
    done, n = 0, 32
    converged = np.zeros(xr.size, dtype=bool)
    while active.size:
        total[active] += shifts(xr[active], done + 1, n)
        done = n
        ok = _spline_tail(m, big, done) * 2.0 * math.pi <= tol * total[active]
        converged[active[ok]] = True
        active = active[~ok]
        if done >= max_terms:
            break
        n = min(2 * n, max_terms)
    return total / (2.0 * math.pi), converged


def _fold_spline(m: int, lam: float, xr: np.ndarray, tol: float) -> _Fold:
    big = 2.0 * math.pi / lam
    j = np.arange(1, math.ceil(m / lam) + 1)
    b = pf.bspline(2 * m, j * lam)
    b0 = float(pf.bspline(2 * m, 0.0))
    poisson = np.empty(xr.size)
    block = max(1, _CHUNK // j.size)
    for start in range(0, xr.size, block):
        sl = slice(start, start + block)
        poisson[sl] = b0 + 2.0 * (np.cos(np.outer(xr[sl], j * lam)) @ b)
    scale = b0 + 2.0 * np.abs(b).sum()
    # absolute rounding error of the cosine sum; about 1.2 eps * scale is observed
    rounding = 4.0 * np.finfo(float).eps * scale
    rel = max(tol, TOL_POISSON)
    hard = poisson < rounding / rel
    if hard.any():
        idx = np.nonzero(hard)[0]
        direct, ok = _spline_direct(m, lam, xr[idx], rel, max_terms=512)
        poisson[idx[ok]] = direct[ok] * big
        rest = idx[~ok]
        if rest.size:
            poisson[rest] = _spline_poisson_mp(m, lam, xr[rest], rel)
    with np.errstate(divide="ignore"):
        return _Fold(np.log(np.maximum(poisson / big, 0.0)), j.size, rounding)


def _fold(spec: pf.PrefilterSpec, lam: float, xi, tol: float = TOL_FOLD) -> _Fold:
    if not lam > 0:
        raise ValueError(f"sampling interval must be positive, got {lam}")
    big = 2.0 * math.pi / lam
    xr = np.atleast_1d(_reduce(xi, big)).ravel()
    if isinstance(spec, pf.Sinc):
        return _fold_sinc(spec, lam, xr)
    if isinstance(spec, pf.Gaussian):
        return _fold_gauss(spec, lam, xr, tol)
    return _fold_spline(spec.m, lam, xr, tol)


@dataclass(frozen=True)
class PeriodizedSpectrum:
    """Values of ``A(xi) = Lambda sum_n |phi_hat(xi + n Lambda)|^2`` on a grid.

    ``truncation_terms`` is the number of shifts per side used by the direct
    sum (or the number of cosine terms of the Poisson form), and
    ``remainder_bound`` bounds the dropped part of ``A``.
    """

    lam: float
    big_lambda: float
    xi: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    truncation_terms: int
    remainder_bound: float


def periodize(
    spec: pf.PrefilterSpec, lam: float, grid: FrequencyGrid, tol: float = TOL_FOLD
) -> PeriodizedSpectrum:
    """Periodized power spectrum ``A`` on the points of ``grid``."""
    xi = grid.points
    fold = _fold(spec, lam, xi, tol)
    big = 2.0 * math.pi / lam
    return PeriodizedSpectrum(
        lam=lam,
        big_lambda=big,
        xi=xi,
        values=big * np.exp(fold.log_sum),
        truncation_terms=fold.terms,
        remainder_bound=fold.remainder,
    )


def riesz_bounds(spec: pf.PrefilterSpec, lam: float, grid: FrequencyGrid | None = None) -> tuple:
    """Grid estimates ``(A, B)`` of the lower and upper Riesz bounds.

    Only one period matters, so the default grid samples ``[-Lambda/2, Lambda/2]``
    with 4001 points.
    """
    if grid is None:
        grid = FrequencyGrid(math.pi / lam, 4001)
    vals = periodize(spec, lam, grid).values
    return float(vals.min()), float(vals.max())


# ---------------------------------------------------------------------------
# dual and interpolating spectra
# ---------------------------------------------------------------------------


def _shape_like(xi, arr):
    return arr.reshape(np.shape(xi)) if np.ndim(xi) else arr.reshape(()).item()


def _require_admissible(spec: pf.PrefilterSpec, lam: float) -> None:
    if isinstance(spec, pf.Sinc):
        return  # the overlap count is exact; bands without coverage get r = 0
    if not pf.admissible(spec, lam):
        raise ResonantInterval(
            f"lam={lam!r} is a resonant interval of {spec!r}; use the limit interpolator"
        )


def central_fraction(spec: pf.PrefilterSpec, lam: float, xi, tol: float = TOL_FOLD):
    """``r(xi) = |phi_hat(xi)|^2 / sum_n |phi_hat(xi + n Lambda)|^2`` in ``[0, 1]``.

    For the sinc family with ``lam < 1/beta`` the shifted bands leave gaps;
    there both numerator and denominator vanish and ``r`` is taken as 0, which
    restricts the interpolator to the band of the prefilter.
    """
    _require_admissible(spec, lam)
    flat = np.atleast_1d(np.asarray(xi, dtype=float)).ravel()
    fold = _fold(spec, lam, flat, tol)
    num = _log_power(spec, flat)
    with np.errstate(invalid="ignore"):
        r = np.exp(num - fold.log_sum)
    r = np.where(np.isneginf(num), 0.0, r)
    if not np.all(np.isfinite(r)):
        raise ResonantInterval(f"periodized spectrum vanishes for {spec!r} at lam={lam!r}")
    return _shape_like(xi, np.minimum(r, 1.0))


def interp_spectrum(spec: pf.PrefilterSpec, lam: float, xi, tol: float = TOL_FOLD):
    """``Phi_int_hat(xi) = Phi_hat(xi) / ((Lambda/sqrt(2 pi)) sum_n Phi_hat(xi + n Lambda))``.

    Raises
    ------
    ResonantInterval
        If ``lam`` is a resonant interval of a spline prefilter.
    """
    return lam / pf.SQRT_2PI * np.asarray(central_fraction(spec, lam, xi, tol))[()]


def aliasing_ratio(spec: pf.PrefilterSpec, lam: float, xi, tol: float = TOL_FOLD):
    """``E(xi) = sum_{n != 0} |phi_hat(xi + n Lambda)|^2 / sum_n |...|^2``."""
    _require_admissible(spec, lam)
    flat = np.atleast_1d(np.asarray(xi, dtype=float)).ravel()
    if isinstance(spec, pf.Gaussian):
        big = 2.0 * math.pi / lam
        n_per = _gauss_terms(spec.beta, big, tol)
        n = np.concatenate([np.arange(-n_per, 0), np.arange(1, n_per + 1)])
        # shifts relative to the unreduced point: the reduction would move n=0
        shifted = -(((flat[None, :] + n[:, None] * big) / spec.beta) ** 2)
        log_rest = special.logsumexp(shifted, axis=0) - _LOG_2PI
        log_all = np.logaddexp(log_rest, _log_power(spec, flat))
        e = np.exp(log_rest - log_all)
    else:
        e = 1.0 - np.asarray(central_fraction(spec, lam, flat, tol))
        if isinstance(spec, pf.Sinc):
            inside = np.abs(flat) <= math.pi * spec.beta
            e = np.where(inside, e, 1.0)
    return _shape_like(xi, np.clip(e, 0.0, 1.0))


def dual_spectrum(spec: pf.PrefilterSpec, lam: float, xi, tol: float = TOL_FOLD):
    """``phi_dual_hat = phi_hat / A``.

    Raises
    ------
    ResonantInterval
        If ``A`` drops below ``EPS_RIESZ`` at a requested point.
    """
    if not isinstance(spec, pf.Sinc):
        _require_admissible(spec, lam)
    flat = np.atleast_1d(np.asarray(xi, dtype=float)).ravel()
    fold = _fold(spec, lam, flat, tol)
    big = 2.0 * math.pi / lam
    denom = big * np.exp(fold.log_sum)
    if np.any(denom < EPS_RIESZ):
        raise ResonantInterval(
            f"periodized spectrum {denom.min():.3g} below {EPS_RIESZ} for {spec!r} at lam={lam!r}"
        )
    return _shape_like(xi, pf.eval_freq(spec, flat) / denom)


def signed_denominator(spec: pf.PrefilterSpec, lam: float, xi, tol: float = TOL_FOLD):
    """``(Lambda/sqrt(2 pi)) sum_n phi_hat(xi + n Lambda)`` (complex, no modulus).

    Splines use the Poisson form ``sum_j phi(j lam) exp(-i j lam xi)``, a finite
    sum because the spline is compactly supported.
    """
    flat = np.atleast_1d(np.asarray(xi, dtype=float)).ravel()
    big = 2.0 * math.pi / lam
    if pf.is_bspline(spec):
        m = spec.m
        if isinstance(spec, pf.BSplineCentered):
            j = np.arange(-math.ceil(0.5 * m / lam), math.ceil(0.5 * m / lam) + 1)
        else:
            j = np.arange(0, math.ceil(m / lam) + 1)
        vals = pf.eval_time(spec, j * lam)
        out = np.exp(-1j * lam * np.outer(flat, j)) @ vals
    elif isinstance(spec, pf.Sinc):
        xr = _reduce(flat, big)
        out = _sinc_count(spec.beta, big, xr) / (pf.SQRT_2PI * spec.beta) * (big / pf.SQRT_2PI)
        out = out.astype(complex)
    else:
        n_per = _gauss_terms(spec.beta, big, tol)
        xr = _reduce(flat, big)
        n = np.arange(-n_per, n_per + 1)[:, None]
        out = (big / pf.SQRT_2PI) * pf.eval_freq(spec, xr[None, :] + n * big).sum(axis=0)
    return _shape_like(xi, out)


def phi_int_V_spectrum(spec: pf.PrefilterSpec, lam: float, xi, tol: float = TOL_FOLD):
    """Interpolating spectrum for the span of ``phi(. - n lam)`` itself,
    ``phi_hat / ((Lambda/sqrt(2 pi)) sum_n phi_hat(xi + n Lambda))``.

    Raises
    ------
    PoleDetected
        Where the signed denominator vanishes (to ``EPS_RIESZ``).
    """
    flat = np.atleast_1d(np.asarray(xi, dtype=float)).ravel()
    denom = np.atleast_1d(signed_denominator(spec, lam, flat, tol))
    bad = np.abs(denom) < EPS_RIESZ
    if bad.any():
        raise PoleDetected(
            f"signed periodization vanishes at xi={flat[bad][0]!r} for {spec!r}, lam={lam!r}"
        )
    return _shape_like(xi, pf.eval_freq(spec, flat) / denom)


def walter_denominator(m: int, n_terms: int) -> tuple:
    """Symmetric partial sum ``S_N = sum_{|n| <= N} [i (n + 1/2) pi]^(-m)`` for odd ``m``.

    Returns ``(S_N, bound)`` with ``bound`` a bound on the modulus of the
    omitted tail.  Terms ``n`` and ``-n-1`` cancel for odd ``m``, so the partial
    sums tend to zero; each term is purely imaginary, hence so is ``S_N``.
    """
    if int(m) != m or m < 3 or m % 2 == 0:
        raise ValueError(f"order must be an odd integer >= 3, got {m}")
    if n_terms < 1:
        raise ValueError("n_terms must be positive")
    n = np.arange(-n_terms, n_terms + 1, dtype=float)
    terms = (1j * (n + 0.5) * math.pi) ** (-m)
    total = complex(math.fsum(terms.real), math.fsum(terms.imag))
    bound = 2.0 * math.pi ** (-m) * n_terms ** (1 - m) / (m - 1)
    return total, bound


# ---------------------------------------------------------------------------
# limit interpolator at a resonance
# ---------------------------------------------------------------------------


def _require_spline(spec):
    if not pf.is_bspline(spec):
        raise WrongFamily(f"limit interpolator is defined for B-splines only, got {spec!r}")


def interp_spectrum_limit(spec: pf.PrefilterSpec, ell: int, xi):
    """Limit interpolating spectrum at the resonant interval ``1/ell``.

    Uses the dilation ``Phi_hat_ell(xi) = Phi_hat(xi/ell)/ell`` on the lattice
    ``Lambda_ell = 2 pi ell``; the common zeros of numerator and denominator are
    cancelled analytically, leaving the integer-lattice central fraction at
    ``xi/ell``.
    """
    _require_spline(spec)
    if int(ell) != ell or ell < 2:
        raise ValueError(f"ell must be an integer >= 2, got {ell}")
    xi = np.asarray(xi, dtype=float)
    r1 = central_fraction(spec, 1.0, xi / ell)
    return np.asarray(r1)[()] / (ell * pf.SQRT_2PI)


# ---------------------------------------------------------------------------
# interpolating function in time
# ---------------------------------------------------------------------------


def _sinc_pieces(beta: float, lam: float):
    """Breakpoints on ``[0, pi beta]`` and the inverse overlap count per piece."""
    big = 2.0 * math.pi / lam
    edge = math.pi * beta
    n_max = math.ceil(2.0 * edge / big) + 1
    cuts = [0.0, edge]
    for n in range(-n_max, n_max + 1):
        for c in (edge - n * big, -edge - n * big):
            if 0.0 < c < edge:
                cuts.append(c)
    cuts = np.unique(cuts)
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    inv = 1.0 / _sinc_count(beta, big, _reduce(mids, big))
    return cuts, inv


class Interpolator:
    """Interpolating function ``Phi_int`` for one prefilter and interval.

    Parameters
    ----------
    spec : PrefilterSpec
    lam : float
        Sampling interval.
    limit_ell : int, optional
        Use the limit interpolator at the resonant interval ``1/limit_ell``
        (B-splines only; ``lam`` must equal ``1/limit_ell``).
    method : {"auto", "exact", "series", "quadrature"}
        Time-domain route.  ``exact`` is the piecewise closed form for sinc,
        ``series`` expands ``Phi_int`` in shifts of ``Phi`` (splines), and
        ``quadrature`` applies the trapezoid rule to ``Phi_int_hat``.
    grid : FrequencyGrid, optional
        Grid for the quadrature route.

    Attributes
    ----------
    method : str
        The route actually used.
    interpolation_residual : float
        Measured ``max |Phi_int(n lam) - delta_n|`` on the central lattice
        nodes, an a-posteriori accuracy indicator.  Very close to a spline
        resonance neither route reaches double precision and this value shows
        how far off the result is.
    """

    #: give up on the series route beyond this ratio ``max B / min B``; the
    #: observed rounding level of ``Phi_int`` is about ``1e-17`` times it
    SERIES_COND_LIMIT = 1e13
    #: largest FFT used for the series coefficients
    SERIES_MAX_SIZE = 1 << 20
    #: lattice nodes ``|n| <= RESIDUAL_NODES`` checked after construction
    RESIDUAL_NODES = 20

    def __init__(self, spec, lam, *, limit_ell=None, method="auto", grid=None):
        self.spec = spec
        self.lam = float(lam)
        self.limit_ell = limit_ell
        if limit_ell is not None:
            _require_spline(spec)
            if abs(self.lam - 1.0 / limit_ell) > pf.TAU_ADM:
                raise ValueError("limit interpolator needs lam == 1/limit_ell")
        else:
            _require_admissible(spec, self.lam)
        if method == "auto":
            if isinstance(spec, pf.Sinc):
                method = "exact"
            elif isinstance(spec, pf.Gaussian):
                method = "quadrature"
            else:
                method = "series"
        if method == "exact" and not isinstance(spec, pf.Sinc):
            raise WrongFamily("the exact route exists for the sinc family only")
        if method == "series" and not pf.is_bspline(spec):
            raise WrongFamily("the series route exists for B-splines only")
        if method == "series":
            if not self._build_series():
                method = "quadrature"
        self.method = method
        if method == "quadrature":
            self.grid = grid if grid is not None else FrequencyGrid.default_for(spec, self.lam)
            self._weights = self.grid.weights * self.spectrum(self.grid.points)
        elif method == "exact":
            self._cuts, self._inv = _sinc_pieces(spec.beta, self.lam)
        n = np.arange(-self.RESIDUAL_NODES, self.RESIDUAL_NODES + 1)
        #: measured ``max |Phi_int(n lam) - delta_n|`` over ``|n| <= RESIDUAL_NODES``
        self.interpolation_residual = float(np.abs(self(n * self.lam) - (n == 0)).max())

    # -- frequency domain ------------------------------------------------------

    def spectrum(self, xi):
        """``Phi_int_hat(xi)``."""
        if self.limit_ell is not None:
            return interp_spectrum_limit(self.spec, self.limit_ell, xi)
        return interp_spectrum(self.spec, self.lam, xi)

    # -- series route ----------------------------------------------------------

    def _kernel(self, u):
        """Autocorrelation on the normalized lattice ``u = x / lam``."""
        m = self.spec.m
        if self.limit_ell is not None:
            return pf.bspline(2 * m, u)
        return pf.bspline(2 * m, u * self.lam)

    def _build_series(self) -> bool:
        """Coefficients ``a`` of ``1/B(theta)``, ``B = sum_j Phi(j lam) e^{-i j theta}``.

        ``B(theta)`` equals the periodized spectrum ``A(theta / lam)``, which is
        taken from the accurate fold so that ``1/B`` is right to a small
        relative error even where ``B`` is tiny.  Relative errors of ``B`` only
        perturb ``Phi_int`` by the same relative amount; the rounding of the
        FFT and of the synthesis grows like ``eps * max B / min B``.
        """
        m = self.spec.m
        lam_b = 1.0 if self.limit_ell is not None else self.lam
        reach = m / lam_b
        self._reach = reach
        j_max = math.ceil(reach)
        j = np.arange(-j_max, j_max + 1)
        b = self._kernel(j.astype(float))
        # 1/B is analytic in an annulus bounded by the roots of z^j_max B(z) nearest
        # the unit circle, so a_k decays like (1 + delta)^-|k|
        roots = np.roots(b[::-1])
        delta = np.abs(np.abs(roots) - 1.0).min()
        if delta <= 0:
            return False
        reach_k = math.ceil(45.0 / math.log1p(delta))
        size = 1 << max(8, math.ceil(math.log2(4 * reach_k + 8 * j_max)))
        if size > self.SERIES_MAX_SIZE:
            return False
        theta = 2.0 * math.pi * np.arange(size) / size
        big = 2.0 * math.pi / lam_b
        bvals = big * np.exp(_fold(self.spec, lam_b, theta / lam_b).log_sum)
        cond = bvals.max() / bvals.min() if bvals.min() > 0 else math.inf
        if cond > self.SERIES_COND_LIMIT:
            return False
        a = np.fft.fftshift(np.fft.ifft(1.0 / bvals).real)
        k = np.arange(size) - size // 2
        # beyond reach_k the computed coefficients are pure rounding noise
        noise = np.abs(a[np.abs(k) > reach_k]).max(initial=0.0)
        keep = np.nonzero((np.abs(k) <= reach_k) & (np.abs(a) > 2.0 * noise))[0]
        lo, hi = keep.min(), keep.max()
        self._a = a[lo : hi + 1]
        self._k0 = int(k[lo])
        self.series_cond = float(cond)
        return True

    def _series_eval(self, coeffs: np.ndarray, k0: int, x) -> np.ndarray:
        """``sum_k coeffs[k - k0] K(x/lam - k)`` over the finite support of ``K``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        h = self.lam
        u = x / h
        span = math.ceil(self._reach) + 1
        offs = np.arange(-span, span + 1)
        out = np.zeros(x.shape, dtype=coeffs.dtype)
        block = max(1, _CHUNK // offs.size)
        for start in range(0, x.size, block):
            ub = u[start : start + block]
            kk = np.floor(ub)[:, None].astype(np.int64) + offs[None, :]
            idx = kk - k0
            valid = (idx >= 0) & (idx < coeffs.size)
            c = np.where(valid, coeffs[np.clip(idx, 0, coeffs.size - 1)], 0.0)
            out[start : start + block] = np.sum(c * self._kernel(ub[:, None] - kk), axis=1)
        return out

    # -- evaluation ------------------------------------------------------------

    def __call__(self, x):
        """``Phi_int(x)`` (real)."""
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x).ravel()
        if self.method == "exact":
            cuts, inv = self._cuts, self._inv
            a, b = cuts[:-1][None, :], cuts[1:][None, :]
            xx = flat[:, None]
            pieces = (b - a) * np.cos(0.5 * xx * (a + b)) * np.sinc(xx * (b - a) / (2.0 * math.pi))
            out = self.lam / math.pi * (pieces @ inv)
        elif self.method == "series":
            out = self._series_eval(self._a, self._k0, flat)
        else:
            vals = fourier_sum(flat, self.grid.points, self._weights) / pf.SQRT_2PI
            resid = np.abs(vals.imag).max() if vals.size else 0.0
            if resid > TAU_SYM:
                raise SymmetryViolation(f"imaginary residue {resid:.3g} exceeds {TAU_SYM}")
            out = vals.real
        return _shape_like(x, out)

    def synthesize(self, n, values, xs) -> np.ndarray:
        """``sum_n values[n] Phi_int(x - n lam)`` at every ``x`` in ``xs``.

        ``n`` must be consecutive integers.
        """
        n = np.asarray(n, dtype=np.int64)
        values = np.asarray(values, dtype=complex)
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        if n.size == 0:
            return np.zeros(xs.shape, dtype=complex)
        if self.method == "series":
            # coefficients of the expansion in shifts of Phi: c = values * a
            c = np.convolve(values, self._a.astype(complex))
            return self._series_eval(c, int(n[0]) + self._k0, xs)
        if self.method == "quadrature":
            xi = self.grid.points
            dtft = np.empty(xi.size, dtype=complex)
            block = max(1, _CHUNK // n.size)
            for start in range(0, xi.size, block):
                sl = slice(start, start + block)
                dtft[sl] = np.exp(-1j * self.lam * np.outer(xi[sl], n)) @ values
            return fourier_sum(xs, xi, self._weights * dtft) / pf.SQRT_2PI
        out = np.zeros(xs.shape, dtype=complex)
        block = max(1, _CHUNK // n.size)
        for start in range(0, xs.size, block):
            xb = xs[start : start + block]
            kern = self(xb[:, None] - n[None, :] * self.lam)
            out[start : start + block] = kern @ values
        return out


def interpolator(
    spec: pf.PrefilterSpec,
    lam: float,
    *,
    at_resonance: str = "raise",
    method: str = "auto",
    grid: FrequencyGrid | None = None,
) -> Interpolator:
    """Build ``Phi_int`` for ``(spec, lam)``.

    With ``at_resonance="limit"`` a B-spline resonant interval ``1/l`` is
    served by the limit interpolator instead of raising ``ResonantInterval``.
    """
    if at_resonance not in ("raise", "limit"):
        raise ValueError("at_resonance must be 'raise' or 'limit'")
    if pf.is_bspline(spec):
        ell = pf.resonant_order(lam)
        if ell is not None:
            if at_resonance == "raise":
                raise ResonantInterval(f"lam={lam!r} is the resonant interval 1/{ell}")
            return Interpolator(spec, 1.0 / ell, limit_ell=ell, method=method, grid=grid)
    return Interpolator(spec, lam, method=method, grid=grid)


def interp_time(spec: pf.PrefilterSpec, lam: float, grid: FrequencyGrid | None, xs) -> np.ndarray:
    """``Phi_int`` at ``xs`` by trapezoid quadrature of its spectrum on ``grid``.

    Raises
    ------
    SymmetryViolation
        If the imaginary residue exceeds ``TAU_SYM`` (grid too coarse).
    """
    return np.asarray(Interpolator(spec, lam, method="quadrature", grid=grid)(xs))


def spectral_distance(f: Callable, g: Callable, grid: FrequencyGrid) -> float:
    """``L2`` distance of two spectra on ``grid`` (equal to the time-domain
    distance by Parseval)."""
    xi = grid.points
    diff = np.abs(np.asarray(f(xi)) - np.asarray(g(xi))) ** 2
    return float(math.sqrt(trapezoid(diff, grid)))
