"""Error bounds for series reconstruction and critical sampling intervals.

For a weight ``w`` with finite moment ``M_w(phi)`` the pointwise relative
error of the reconstruction satisfies

    eps^2(x) <= 8 M_w(phi) * sum_{n >= 1} 1 / w((2n - 1) pi / lam),

reported here "per unit ``||g||_phi^2``".  Monomial weights turn the series
into a Hurwitz zeta value; Gaussian weights into a super-exponentially small
sum.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special

from . import prefilter as pf
from .errors import BoundViolation, WrongFamily

#: relative accuracy of the series and zeta evaluations
TOL_SERIES = 1e-12


# ---------------------------------------------------------------------------
# zeta functions
# ---------------------------------------------------------------------------


def hurwitz_zeta(s: float, a: float = 1.0, n_direct: int = 20, n_corr: int = 12) -> float:
    """Hurwitz zeta ``sum_{n >= 0} (n + a)^-s`` for ``s > 1``, ``a > 0``.

    Euler-Maclaurin: sum the first ``n_direct`` terms, then add the integral,
    half the boundary term and ``n_corr`` Bernoulli corrections.
    """
    if not s > 1:
        raise ValueError(f"zeta needs s > 1, got {s}")
    if not a > 0:
        raise ValueError(f"Hurwitz parameter must be positive, got {a}")
    n = np.arange(n_direct)
    head = math.fsum((n + a) ** (-s))
    x = n_direct + a
    total = head + x ** (1 - s) / (s - 1) + 0.5 * x ** (-s)
    b2k = special.bernoulli(2 * n_corr)
    rising = s  # s (s+1) ... (s + 2k - 2)
    for k in range(1, n_corr + 1):
        term = b2k[2 * k] / math.factorial(2 * k) * rising * x ** (-s - 2 * k + 1)
        total += term
        rising *= (s + 2 * k - 1) * (s + 2 * k)
    return total


def zeta(s: float) -> float:
    """Riemann zeta ``sum_{n >= 1} n^-s`` for ``s > 1``."""
    return hurwitz_zeta(s, 1.0)


def odd_zeta(s: float) -> float:
    """``sum_{n >= 1} (2n - 1)^-s = (1 - 2^-s) zeta(s)``."""
    return (1.0 - 2.0 ** (-s)) * zeta(s)


# ---------------------------------------------------------------------------
# Chebyshev-type tail inequality
# ---------------------------------------------------------------------------


def chebyshev_tail(density: Callable, w: pf.WeightSpec, M: float, t: float) -> tuple:
    """Tail mass ``integral_{|x| >= t} density`` and its bound ``M / w(t)``.

    ``M`` must be (an upper bound of) ``integral w(|x|) density(x) dx``.

    Raises
    ------
    BoundViolation
        If the computed tail exceeds the bound.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    right, _ = integrate.quad(density, t, np.inf, epsabs=0.0, epsrel=1e-13, limit=200)
    left, _ = integrate.quad(density, -np.inf, -t, epsabs=0.0, epsrel=1e-13, limit=200)
    tail = left + right
    bound = M / float(pf.weight(w, t))
    if tail > bound * (1.0 + 1e-12):
        raise BoundViolation(f"tail {tail!r} exceeds M/w(t) = {bound!r}")
    return tail, bound


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------


def odd_series(w: pf.WeightSpec, lam: float, tol: float = TOL_SERIES) -> tuple:
    """``sum_{n >= 1} 1 / w((2n - 1) pi / lam)`` as ``(value, terms, remainder)``.

    Monomial and scaled-sinc weights are summed in closed form through zeta
    values (``terms`` is 0 and ``remainder`` the zeta accuracy).  Gaussian
    weights are summed directly until the geometric bound on the rest is
    below ``tol`` relative.
    """
    if not lam > 0:
        raise ValueError("lam must be positive")
    q = math.pi / lam
    if isinstance(w, pf.Monomial):
        value = q ** (-w.s) * odd_zeta(w.s)
        return value, 0, TOL_SERIES * value
    if isinstance(w, pf.SincScaled):
        c = w.s * (math.pi * w.beta) ** (1.0 - w.s)
        value = q ** (1.0 - w.s) * odd_zeta(w.s - 1.0) / c
        return value, 0, TOL_SERIES * value
    if isinstance(w, pf.GaussExp):
        # log-domain terms: -a ((2n-1) q)^2
        first = -w.a * q * q
        total = 0.0
        n = 1
        while True:
            term = math.exp(-w.a * ((2 * n - 1) * q) ** 2 - first)
            total += term
            # ratio of consecutive later terms is at most exp(-8 a q^2 n)
            ratio = math.exp(-8.0 * w.a * q * q * n)
            nxt = math.exp(-w.a * ((2 * n + 1) * q) ** 2 - first)
            rem = nxt / (1.0 - ratio) if ratio < 1.0 else math.inf
            if rem <= tol * total:
                break
            n += 1
        scale = math.exp(first)
        return total * scale, n, rem * scale
    raise TypeError(f"unknown weight {w!r}")


# ---------------------------------------------------------------------------
# bounds and critical intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    """Inputs and results of one bound evaluation (per unit ``||g||_phi^2``)."""

    spec: pf.PrefilterSpec
    weight: pf.WeightSpec
    lam: float
    M_w: float
    series_value: float
    bound_sq: float
    critical_lambda: float
    terms_used: int
    remainder: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["spec"] = {"family": type(self.spec).__name__, **asdict(self.spec)}
        d["weight"] = {"kind": type(self.weight).__name__, **asdict(self.weight)}
        return d


def critical_interval(spec: pf.PrefilterSpec, mode: str = "soft", s: float = 2.0) -> float:
    """Critical sampling interval.

    Parameters
    ----------
    mode : {"monomial", "gaussian", "soft"}
        ``monomial``: ``pi / mu_s``; ``gaussian``: ``1 / beta`` (Gaussian
        prefilters only); ``soft``: ``1 / sigma``.

    Raises
    ------
    WrongFamily
        For ``gaussian`` mode on another family.
    DivergentMoment
        If the needed moment is infinite.
    """
    if mode == "monomial":
        return math.pi / pf.mu_s(spec, s)
    if mode == "gaussian":
        if not isinstance(spec, pf.Gaussian):
            raise WrongFamily("gaussian mode applies to Gaussian prefilters only")
        return 1.0 / spec.beta
    if mode == "soft":
        return 1.0 / pf.soft_bandwidth(spec)
    raise ValueError(f"unknown mode {mode!r}")


def _critical_for(spec: pf.PrefilterSpec, w: pf.WeightSpec) -> float:
    if isinstance(spec, pf.Sinc):
        return 1.0 / spec.beta
    if isinstance(spec, pf.Gaussian) and isinstance(w, pf.GaussExp):
        return critical_interval(spec, "gaussian")
    if isinstance(w, pf.Monomial) and w.s == 2.0:
        return critical_interval(spec, "soft")
    if isinstance(w, pf.Monomial):
        return critical_interval(spec, "monomial", w.s)
    return critical_interval(spec, "soft")


def general_bound(spec: pf.PrefilterSpec, w: pf.WeightSpec, lam: float) -> BoundReport:
    """``bound_sq = 8 M_w(phi) sum_n 1/w((2n-1) pi / lam)`` with its inputs.

    Raises
    ------
    DivergentMoment
        If ``M_w(phi)`` is infinite.
    """
    m_w = pf.moment(spec, w)
    value, terms, rem = odd_series(w, lam)
    return BoundReport(
        spec=spec,
        weight=w,
        lam=lam,
        M_w=m_w,
        series_value=value,
        bound_sq=8.0 * m_w * value,
        critical_lambda=_critical_for(spec, w),
        terms_used=terms,
        remainder=8.0 * m_w * rem,
    )


def monomial_bound(spec: pf.PrefilterSpec, s: float, lam: float) -> float:
    """``8 (1 - 2^-s) zeta(s) (mu_s lam / pi)^s ||phi||^2``."""
    return 8.0 * odd_zeta(s) * (pf.mu_s(spec, s) * lam / math.pi) ** s * pf.norm_sq(spec)


def gaussian_closed_bound(beta: float, lam: float) -> float:
    """``(16 beta / sqrt(2 pi)) exp(-(pi/lam)^2 / (2 beta^2))``, which dominates the
    Gaussian-weight bound for ``lam < 1/beta``."""
    return 16.0 * beta / pf.SQRT_2PI * math.exp(-((math.pi / lam) ** 2) / (2.0 * beta * beta))
