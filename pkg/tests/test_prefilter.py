import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from locsample import prefilter as pf
from locsample.errors import DivergentMoment

SQ2PI = math.sqrt(2 * math.pi)

ALL_SPECS = [
    pf.Sinc(4.0),
    pf.Gaussian(2.0),
    pf.BSplineCentered(2),
    pf.BSplineCentered(3),
    pf.BSplineNonCentered(3),
]


# -- construction ------------------------------------------------------------


@pytest.mark.parametrize(
    "factory",
    [lambda: pf.Sinc(0.0), lambda: pf.Gaussian(-1.0), lambda: pf.BSplineCentered(1), lambda: pf.Monomial(1.0),
     lambda: pf.SincScaled(2.0, 1.0), lambda: pf.GaussExp(0.0)],
)
def test_invalid_parameters_rejected(factory):
    with pytest.raises(ValueError):
        factory()


# -- time and frequency evaluation -------------------------------------------


def test_eval_time_peaks():
    assert pf.eval_time(pf.Sinc(4), 0.0) == pytest.approx(1.0)
    assert pf.eval_time(pf.Gaussian(2), 0.0) == pytest.approx(2 / SQ2PI)
    assert pf.eval_time(pf.BSplineCentered(2), 0.0) == pytest.approx(1.0)
    assert pf.eval_time(pf.BSplineCentered(2), [-1.0, 1.0]) == pytest.approx([0.0, 0.0])


def test_eval_freq_values():
    assert pf.eval_freq(pf.Sinc(4), 0.0) == pytest.approx(1 / (4 * SQ2PI))
    assert pf.eval_freq(pf.Gaussian(2), 0.0) == pytest.approx(1 / SQ2PI)
    assert abs(pf.eval_freq(pf.BSplineCentered(3), 2 * math.pi)) < 1e-16


def test_cubic_spline_known_values():
    # classical values of the cubic B-spline
    x = np.array([0.0, 0.5, 1.0, 1.5, 2.0, 2.5])
    expected = np.array([2 / 3, 23 / 48, 1 / 6, 1 / 48, 0.0, 0.0])
    assert pf.bspline(4, x) == pytest.approx(expected, abs=1e-15)


def test_noncentered_spline_is_shifted_centered():
    x = np.linspace(-1, 5, 61)
    assert pf.eval_time(pf.BSplineNonCentered(3), x) == pytest.approx(
        pf.eval_time(pf.BSplineCentered(3), x - 1.5), abs=1e-15
    )


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_spline_is_convolution_power_of_box(m):
    # oracle: repeated discrete convolution of the box on a fine grid
    h = 1e-3
    box = np.ones(int(round(1 / h)))
    ker = box.copy()
    for _ in range(m - 1):
        ker = np.convolve(ker, box) * h
    t = (np.arange(ker.size) + 0.5 * m) * h  # centre of mass of the discrete kernel
    assert pf.cardinal_bspline(m, t) == pytest.approx(ker, abs=5 * m * h)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=repr)
def test_eval_freq_matches_quadrature_of_eval_time(spec):
    # oracle: direct quadrature of the defining Fourier integral
    xi = np.array([0.0, 0.7, 2.3, 5.0])
    if isinstance(spec, pf.Sinc):
        pytest.skip("sinc is not absolutely integrable; covered by the autocorrelation test")
    lo, hi = {pf.Gaussian: (-12.0, 12.0)}.get(type(spec), (-spec.m, spec.m) if pf.is_bspline(spec) else (0, 0))
    for k in xi:
        re, _ = integrate.quad(lambda x: pf.eval_time(spec, x) * math.cos(k * x), lo, hi, limit=200,
                               points=list(range(int(lo), int(hi) + 1)) if pf.is_bspline(spec) else None)
        im, _ = integrate.quad(lambda x: -pf.eval_time(spec, x) * math.sin(k * x), lo, hi, limit=200,
                               points=list(range(int(lo), int(hi) + 1)) if pf.is_bspline(spec) else None)
        assert complex(pf.eval_freq(spec, k)) == pytest.approx(complex(re, im) / SQ2PI, abs=1e-10)


@given(st.floats(-200, 200))
def test_power_bounded_and_nonnegative(xi):
    for spec in ALL_SPECS:
        p = pf.autocorr_freq(spec, xi)
        assert p >= 0
        assert p <= float(pf.autocorr_freq(spec, 0.0)) + 1e-15


def test_centered_and_noncentered_autocorr_bitwise_equal():
    xi = np.linspace(-50, 50, 10001)
    for m in (2, 3, 4):
        a = pf.autocorr_freq(pf.BSplineCentered(m), xi)
        b = pf.autocorr_freq(pf.BSplineNonCentered(m), xi)
        assert np.array_equal(a, b)


@pytest.mark.parametrize("m", [2, 3])
def test_spline_autocorrelation_spectrum_is_double_order_spline(m):
    xi = np.linspace(-20, 20, 401)
    assert pf.autocorr_freq(pf.BSplineCentered(m), xi) == pytest.approx(
        np.abs(pf.eval_freq(pf.BSplineCentered(2 * m), xi)), rel=1e-14, abs=1e-300
    )


# -- autocorrelation in time -------------------------------------------------


@pytest.mark.parametrize("x", [0.0, 0.1, 0.37, 1.2])
def test_sinc_autocorrelation_by_inverse_transform(x):
    beta = 4.0
    # oracle: integrate exp(i x xi) Phi_hat over the band
    val, _ = integrate.quad(lambda k: math.cos(x * k) / (2 * math.pi * beta**2) * SQ2PI,
                            -math.pi * beta, math.pi * beta)
    assert pf.autocorr_time(pf.Sinc(beta), x) == pytest.approx(val / SQ2PI, abs=1e-12)


def test_gaussian_norm_by_quadrature():
    beta = 2.0
    val, _ = integrate.quad(lambda x: pf.eval_time(pf.Gaussian(beta), x) ** 2, -np.inf, np.inf)
    assert pf.autocorr_time(pf.Gaussian(beta), 0.0) == pytest.approx(val, rel=1e-12)
    assert pf.norm_sq(pf.Gaussian(beta)) == pytest.approx(beta / (2 * math.sqrt(math.pi)))


@pytest.mark.parametrize("spec", [pf.BSplineCentered(2), pf.BSplineNonCentered(3), pf.Gaussian(1.5)], ids=repr)
@pytest.mark.parametrize("x", [0.0, 0.4, 1.3])
def test_autocorrelation_is_inner_product_of_shifts(spec, x):
    lo, hi = (-10.0, 10.0) if isinstance(spec, pf.Gaussian) else (-spec.m, 2.0 * spec.m)
    val, _ = integrate.quad(lambda y: pf.eval_time(spec, y) * pf.eval_time(spec, y - x), lo, hi, limit=400,
                            points=[k * 0.5 for k in range(int(2 * lo), int(2 * hi) + 1)] if pf.is_bspline(spec) else None)
    assert pf.autocorr_time(spec, x) == pytest.approx(val, abs=1e-10)


def test_quadratic_spline_autocorrelation_at_zero():
    # beta^3(0) = 2/3
    assert pf.autocorr_time(pf.BSplineCentered(2), 0.0) == pytest.approx(2 / 3)


# -- admissibility -----------------------------------------------------------


def test_admissible_examples():
    assert pf.admissible(pf.Sinc(4), 0.25)
    assert not pf.admissible(pf.Sinc(4), 0.2)
    assert pf.admissible(pf.Gaussian(2), 10.0)
    assert not pf.admissible(pf.BSplineCentered(3), 1 / 3)
    assert pf.admissible(pf.BSplineCentered(3), 0.3)
    assert not pf.admissible(pf.BSplineCentered(3), 0.25 + 1e-10)
    assert pf.admissible(pf.BSplineCentered(3), 0.25 + 1e-8)


def test_admissible_requires_positive_interval():
    with pytest.raises(ValueError):
        pf.admissible(pf.Gaussian(1), 0.0)


@given(st.floats(0.01, 5), st.floats(0.01, 5))
def test_sinc_admissibility_monotone(l1, l2):
    spec = pf.Sinc(3.0)
    lo, hi = sorted((l1, l2))
    if pf.admissible(spec, lo):
        assert pf.admissible(spec, hi)


# -- moments -----------------------------------------------------------------


@pytest.mark.parametrize("s", [2.5, 3.0, 4.0, 7.0])
def test_sinc_scaled_moment(s):
    assert pf.moment(pf.Sinc(4), pf.SincScaled(s, 4)) == pytest.approx(0.25, rel=1e-12)


def test_gaussian_exponential_moment():
    beta = 2.0
    assert pf.moment(pf.Gaussian(beta), pf.GaussExp(1 / (2 * beta**2))) == pytest.approx(beta / SQ2PI, rel=1e-12)


def test_gaussian_exponential_moment_diverges_at_threshold():
    with pytest.raises(DivergentMoment):
        pf.moment(pf.Gaussian(2.0), pf.GaussExp(0.25))
    with pytest.raises(DivergentMoment):
        pf.moment(pf.BSplineCentered(3), pf.GaussExp(0.1))


def _spline_moment_oracle(m, s, cut):
    # brute force: quadrature over [0, cut] with breakpoints at the zeros
    f = lambda t: t**s * np.sinc(t / (2 * math.pi)) ** (2 * m) / math.pi  # noqa: E731
    edges = np.arange(0.0, cut + 1e-9, 2 * math.pi)
    return math.fsum(integrate.quad(f, a, b, epsabs=0, epsrel=1e-13)[0] for a, b in zip(edges[:-1], edges[1:]))


@pytest.mark.parametrize("m,s", [(2, 2.0), (3, 2.0), (3, 4.0), (4, 1.5)])
def test_spline_moment_against_truncated_quadrature(m, s):
    # two resolutions of the same oracle bracket the analytic tail
    a = _spline_moment_oracle(m, s, 2 * math.pi * 400)
    b = _spline_moment_oracle(m, s, 2 * math.pi * 800)
    got = pf.moment(pf.BSplineCentered(m), pf.Monomial(s))
    tail = abs(b - a) * 2
    assert got == pytest.approx(b, abs=tail + 1e-10)


def test_quadratic_spline_second_moment_is_derivative_norm():
    # |xi phi_hat|^2 integrates to ||phi'||^2 = 2 for the hat function
    assert pf.moment(pf.BSplineCentered(2), pf.Monomial(2.0)) == pytest.approx(2.0, rel=1e-10)


@pytest.mark.parametrize("m,s", [(2, 3.0), (2, 3.5), (3, 5.0)])
def test_spline_moment_divergence(m, s):
    with pytest.raises(DivergentMoment):
        pf.moment(pf.BSplineCentered(m), pf.Monomial(s))


def test_sinc_exponential_moment_by_quadrature():
    beta, a = 1.5, 0.05
    val, _ = integrate.quad(lambda k: math.exp(a * k * k) / (2 * math.pi * beta**2), -math.pi * beta, math.pi * beta)
    assert pf.moment(pf.Sinc(beta), pf.GaussExp(a)) == pytest.approx(val, rel=1e-12)


# -- bandwidth measures ------------------------------------------------------


@pytest.mark.parametrize("beta", [0.5, 2.0, 3.7])
def test_soft_bandwidth_closed_forms(beta):
    assert pf.soft_bandwidth(pf.Gaussian(beta)) == pytest.approx(beta / math.sqrt(2), rel=1e-12)
    assert pf.soft_bandwidth(pf.Sinc(beta)) == pytest.approx(math.pi * beta / math.sqrt(3), rel=1e-12)


def test_sinc_bandwidth_by_quadrature():
    beta = 4.0
    num, _ = integrate.quad(lambda k: k * k, -math.pi * beta, math.pi * beta)
    assert pf.soft_bandwidth(pf.Sinc(beta)) == pytest.approx(math.sqrt(num / (2 * math.pi * beta)), rel=1e-12)


def test_spline_soft_bandwidth():
    # ||phi'||^2 / ||phi||^2 = 2 / (2/3) = 3
    assert pf.soft_bandwidth(pf.BSplineCentered(2)) == pytest.approx(math.sqrt(3), rel=1e-10)


@pytest.mark.parametrize("spec", ALL_SPECS, ids=repr)
def test_soft_bandwidth_is_mu_2(spec):
    assert pf.soft_bandwidth(spec) == pf.mu_s(spec, 2.0)
    assert pf.mu_s(spec, 1.5) > 0


def test_gaussian_mu_s_matches_quadrature():
    beta, s = 2.0, 3.0
    num, _ = integrate.quad(lambda k: abs(k) ** s * math.exp(-k * k / beta**2) / (2 * math.pi), -np.inf, np.inf)
    assert pf.mu_s(pf.Gaussian(beta), s) == pytest.approx((num / pf.norm_sq(pf.Gaussian(beta))) ** (1 / s), rel=1e-10)


def test_weights_increase():
    xi = np.linspace(0.1, 10, 50)
    for w in (pf.Monomial(2.5), pf.GaussExp(0.3), pf.SincScaled(3.0, 2.0)):
        assert np.all(np.diff(pf.weight(w, xi)) > 0)


@settings(max_examples=30)
@given(st.floats(1.1, 2.9))
def test_spline_moment_finite_below_threshold(s):
    assert 0 < pf.moment(pf.BSplineCentered(2), pf.Monomial(s)) < math.inf
