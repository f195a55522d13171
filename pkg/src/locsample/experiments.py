"""End-to-end experiments shared by the command line and the acceptance suite."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from . import prefilter as pf
from . import sampling as sa
from . import spectrum as sp


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved inputs of a CLI run."""

    prefilter: pf.PrefilterSpec
    lambdas: tuple = (0.25,)
    weight: pf.WeightSpec | None = None
    signal: sa.TestSignalSpec | None = None
    window: tuple = (-5.0, 5.0, 1001)
    seed: int = 0
    limit_ell: int | None = None
    tolerances: dict = field(default_factory=lambda: {"trunc": sa.TAU_TRUNC, "sym": sp.TAU_SYM})

    def __post_init__(self):
        x0, x1, n = self.window
        if not (int(n) >= 2 and x0 < x1):
            raise ValueError("window needs x_min < x_max and at least 2 points")
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        if self.weight is None:
            object.__setattr__(self, "weight", default_weight(self.prefilter))
        if self.signal is None:
            object.__setattr__(self, "signal", default_signal(self.prefilter, self.seed))

    @property
    def xs(self) -> np.ndarray:
        x0, x1, n = self.window
        return np.linspace(x0, x1, int(n))


def default_weight(spec: pf.PrefilterSpec) -> pf.WeightSpec:
    """A weight with finite moment for each family."""
    if isinstance(spec, pf.Sinc):
        return pf.SincScaled(4.0, spec.beta)
    if isinstance(spec, pf.Gaussian):
        return pf.GaussExp(0.5 / spec.beta**2)
    return pf.Monomial(2.0)


def default_signal(spec: pf.PrefilterSpec, seed: int) -> sa.RandomSpectrum:
    """Seeded random test signal suited to the family.

    For sinc the spectrum is kept well inside the band so that the prefiltered
    signal stays time-localized; other families get a wide band that crosses
    the folding frequency of the usual sampling intervals.
    """
    if isinstance(spec, pf.Sinc):
        band = 0.65 * math.pi * spec.beta
        return sa.RandomSpectrum(seed=seed, band=band, spread=0.5)
    return sa.RandomSpectrum(seed=seed, band=20.0, spread=1.0)


@dataclass
class ReconstructionResult:
    lam: float
    xs: np.ndarray = field(repr=False)
    g: np.ndarray = field(repr=False)
    g_tilde: np.ndarray = field(repr=False)
    norm: float = 0.0
    sup_abs: float = 0.0
    sup_rel: float = 0.0
    lattice_mismatch_max: float = 0.0
    bound: bounds.BoundReport | None = None
    method: str = ""
    limit_ell: int | None = None

    @property
    def bound_sq(self) -> float:
        return self.bound.bound_sq if self.bound is not None else math.nan


def run_reconstruction(
    spec: pf.PrefilterSpec,
    lam: float,
    signal: sa.TestSignalSpec,
    *,
    weight: pf.WeightSpec | None = None,
    xs=None,
    at_resonance: str = "limit",
    tau_trunc: float = sa.TAU_TRUNC,
) -> ReconstructionResult:
    """Prefilter, sample, reconstruct and measure one test signal."""
    xs = np.linspace(-5.0, 5.0, 1001) if xs is None else np.asarray(xs, dtype=float)
    weight = default_weight(spec) if weight is None else weight
    margin = sa.time_reach(signal) + sa.prefilter_reach(spec) + 2.0
    n_min, n_max = sa.lattice_window(xs, lam, margin)
    span = max(abs(n_min), abs(n_max)) * lam + sa.prefilter_reach(spec)
    grid = sa.signal_grid(signal, span)
    f = sa.synthesize(signal, grid)
    _, g_eval = sa.prefilter_apply(f, spec)
    phi = sp.interpolator(spec, lam, at_resonance=at_resonance)
    samples = sa.sample(g_eval, lam, n_min, n_max)
    g_tilde = sa.reconstruct(samples, phi, xs, tau_trunc=tau_trunc)
    g = g_eval(xs)
    norm = sa.norm_phi(f, spec)
    err = sa.measure_error(g, g_tilde, xs, norm)
    inside = samples.n[(samples.positions >= xs.min()) & (samples.positions <= xs.max())]
    if inside.size:
        at_nodes = sa.reconstruct(samples, phi, inside * lam, tau_trunc=tau_trunc)
        mismatch = np.abs(at_nodes - samples.values[inside - n_min]).max() / norm
    else:
        mismatch = 0.0
    return ReconstructionResult(
        lam=lam,
        xs=xs,
        g=g,
        g_tilde=g_tilde,
        norm=norm,
        sup_abs=err.sup_abs,
        sup_rel=err.sup_rel,
        lattice_mismatch_max=float(mismatch),
        bound=bounds.general_bound(spec, weight, lam),
        method=phi.method,
        limit_ell=phi.limit_ell,
    )


def run_span_reconstruction(
    spec: pf.PrefilterSpec, lam: float, coefficients, xs=None, n_min: int = -10
) -> tuple:
    """Reconstruct ``g = sum_n c_n Phi(. - n lam)`` from its samples.

    Returns ``(xs, g, g_tilde)``.
    """
    xs = np.linspace(-5.0, 5.0, 1001) if xs is None else np.asarray(xs, dtype=float)
    c = np.asarray(coefficients, dtype=complex)
    g, _ = sa.shift_combination(spec, lam, c, n_min)
    phi = sp.interpolator(spec, lam, at_resonance="limit")
    reach = abs(n_min) + c.size
    margin = reach * lam + 12.0 * _decay_length(spec) + 1.0
    lo, hi = sa.lattice_window(xs, lam, margin)
    samples = sa.sample(g, lam, lo, hi)
    return xs, g(xs), sa.reconstruct(samples, phi, xs)


def _decay_length(spec: pf.PrefilterSpec) -> float:
    if isinstance(spec, pf.Gaussian):
        return 1.0 / spec.beta
    if isinstance(spec, pf.Sinc):
        return 1.0 / spec.beta
    return 1.0


def interp_traces(spec: pf.PrefilterSpec, lam: float | None, xs, xis, limit_ell: int | None = None):
    """``(Phi_int(xs), Phi_int_hat(xis), interpolation_residual)`` for a regular
    or limit interpolator."""
    if limit_ell is not None:
        phi = sp.Interpolator(spec, 1.0 / limit_ell, limit_ell=limit_ell)
    else:
        phi = sp.interpolator(spec, lam)
    return np.asarray(phi(xs)), np.asarray(phi.spectrum(xis)), phi.interpolation_residual
