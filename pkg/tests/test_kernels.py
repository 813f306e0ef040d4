import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from wavelab import kernels as K
from wavelab.moments import gg_functional_spectral
from wavelab.wavekernel import gg_functional_physical

# f(r) = int_0^inf w^((alpha-5)/2) e^{-w} e^{-r^2/(4w)} dw, by mpmath quad at 30 digits
BESSEL_REFERENCE = [
    (1.5, 0.3, 18.112410950338813),
    (1.5, 1.0, 1.7348544057264188),
    (1.5, 4.0, 0.014136194605186113),
    (2.0, 0.3, 8.7537740537885558),
    (2.0, 1.0, 1.3040986643465844),
    (2.0, 4.0, 0.016231812340065863),
    (5.0, 0.0, 1.0),
    (5.0, 0.3, 0.91679761003719751),
    (5.0, 1.0, 0.60190723019723458),
    (5.0, 4.0, 0.049933995549073726),
]


def test_riesz_value():
    k = K.make_kernel("riesz", beta=1.0)
    assert K.eval_f(k, [2.0, 0.0, 0.0]) == pytest.approx(0.5, rel=1e-15)
    assert K.eval_f(k, [0.0, 0.0, 0.0]) == math.inf


def test_fractional_value_at_ones():
    k = K.make_kernel("fractional", h1=0.75, h2=0.75, h3=0.75)
    assert K.eval_f(k, [1.0, 1.0, 1.0]) == pytest.approx(0.052734375, rel=1e-15)
    assert K.eval_f(k, [1.0, 0.0, 2.0]) == math.inf


@pytest.mark.parametrize("alpha, r, expected", BESSEL_REFERENCE)
def test_bessel_against_half_line_integral(alpha, r, expected):
    k = K.make_kernel("bessel", alpha=alpha)
    assert K.eval_f(k, [r, 0.0, 0.0]) == pytest.approx(expected, rel=1e-12)


def test_bessel_singular_at_origin_for_small_alpha():
    k = K.make_kernel("bessel", alpha=2.0)
    assert K.eval_f(k, [0.0, 0.0, 0.0]) == math.inf


def test_bessel_monotone_and_decaying(bessel2):
    r = np.geomspace(1e-3, 60.0, 400)
    f = bessel2.f_radial(r)
    assert np.all(np.diff(f) <= 0)
    assert f[-1] < 1e-20


@pytest.mark.parametrize("r", [1e-6, 1e-3, 0.1, 0.7, 1.0, 2.5, 6.0, 9.0])
def test_smoothed_riesz_beta1_matches_gaussian_potential(smoothed1, r):
    # int exp(-|y|^2) / |x - y| dy = pi^(3/2) erf(r) / r
    expected = math.pi ** 1.5 * math.erf(r) / r
    assert smoothed1.f_radial(np.array([r]))[0] == pytest.approx(expected, rel=1e-10)


def test_smoothed_riesz_at_origin(smoothed1):
    assert smoothed1.f_radial(np.array([0.0]))[0] == pytest.approx(2 * math.pi, rel=1e-14)


@pytest.mark.parametrize("family, params", [
    ("riesz", {"beta": 0.7}),
    ("bessel", {"alpha": 2.5}),
    ("fractional", {"h1": 0.6, "h2": 0.7, "h3": 0.9}),
    ("smoothed_riesz", {"beta": 1.3}),
])
@settings(max_examples=30, deadline=None)
@given(x=st.tuples(*[st.floats(-5, 5).filter(lambda v: abs(v) > 1e-3)] * 3))
def test_f_nonnegative_and_even(family, params, x):
    k = K.make_kernel(family, **params)
    a = K.eval_f(k, np.array(x))
    b = K.eval_f(k, -np.array(x))
    assert a >= 0
    assert a == b


def test_spectral_density_riesz_shape():
    k = K.make_kernel("riesz", beta=1.0, include_constants=False)
    assert K.eval_spectral_density(k, [2.0, 0.0, 0.0]) == pytest.approx(0.25, rel=1e-15)


def test_spectral_density_singular_set():
    frac = K.make_kernel("fractional", h1=0.8, h2=0.8, h3=0.8)
    with pytest.raises(ValueError):
        K.eval_spectral_density(frac, [1.0, 0.0, 1.0])
    riesz = K.make_kernel("riesz", beta=1.0)
    with pytest.raises(ValueError):
        K.eval_spectral_density(riesz, [0.0, 0.0, 0.0])
    assert frac.density.axis_singular and not riesz.density.axis_singular


@pytest.mark.parametrize("xi", [1.0, 2.0, 4.0])
def test_fractional_one_dimensional_constant(xi):
    # 2 H (2H-1) int_0^inf x^(2H-2) cos(xi x) dx by QUADPACK (algebraic head, QAWF tail)
    h = 0.8
    p = 2 * h - 2
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        head, _ = integrate.quad(lambda x: math.cos(xi * x), 0.0, 1.0, weight="alg", wvar=(p, 0.0))
        tail, _ = integrate.quad(lambda x: x ** p, 1.0, np.inf, weight="cos", wvar=xi)
    oracle = 2 * h * (2 * h - 1) * (head + tail)
    assert K.fractional_constant(h) * xi ** (1 - 2 * h) == pytest.approx(oracle, rel=1e-2)
    assert K.fractional_constant(h) * xi ** (1 - 2 * h) == pytest.approx(oracle, rel=1e-8)


def test_riesz_constant_formula():
    # c3(1) = 4 pi (the transform of 1/|x| is 4 pi / |xi|^2)
    assert K.riesz_constant(1.0) == pytest.approx(4 * math.pi, rel=1e-15)


@pytest.mark.parametrize("family, params", [
    ("riesz", {"beta": 0.5}),
    ("riesz", {"beta": 1.0}),
    ("riesz", {"beta": 1.5}),
    ("bessel", {"alpha": 2.0}),
    ("bessel", {"alpha": 5.0}),
    ("fractional", {"h1": 0.8, "h2": 0.8, "h3": 0.8}),
    ("fractional", {"h1": 0.6, "h2": 0.75, "h3": 0.9}),
    ("smoothed_riesz", {"beta": 1.0}),
])
@pytest.mark.parametrize("s, t", [(1.0, 1.0), (1.5, 1.0), (2.0, 0.5)])
def test_constants_pinned_by_dual_computation(family, params, s, t):
    k = K.make_kernel(family, **params)
    phys = gg_functional_physical(k, s, t).value
    spec = gg_functional_spectral(k, s, t).value
    assert abs(spec - phys) / phys < 1e-3


def test_h2_certificate(riesz1, frac08, bessel2):
    for k in (riesz1, frac08, bessel2):
        cert = k.density.h2_certificate
        assert cert is not None and np.isfinite(cert.value) and cert.value > 0
        assert cert.certificate.delta < cert.certificate.tolerance
    # Riesz beta = 1: int 4 pi r^2 (1/(2 pi^2)) r^-2 / (1 + r^2) dr = 1
    assert riesz1.density.h2_certificate.value == pytest.approx(1.0, rel=1e-6)


def test_predicted_exponents_tables():
    r = K.predicted_exponents(K.make_kernel("riesz", beta=1.0))
    assert (r.nu_sup, r.rho1_sup, r.rho2_sup, r.gamma_sup) == (1.0, 1.0, 1.0, 0.5)
    b = K.predicted_exponents(K.make_kernel("bessel", alpha=1.5))
    assert b.nu_sup == b.gamma_sup == b.rho1_sup == 0.5
    assert b.gamma_prime_sup == b.rho2_sup == 0.5
    f = K.predicted_exponents(K.make_kernel("fractional", h1=0.8, h2=0.8, h3=0.8))
    assert f.kappa_bar == pytest.approx(0.4, abs=1e-15)
    assert f.per_direction_space == pytest.approx((0.3, 0.3, 0.3), abs=1e-15)
    assert f.nu_sup == pytest.approx(0.8, abs=1e-15)
    assert f.gamma_sup is None


@pytest.mark.parametrize("family, params", [
    ("riesz", {"beta": 0.0}),
    ("riesz", {"beta": 2.0}),
    ("bessel", {"alpha": 1.0}),
    ("fractional", {"h1": 0.5, "h2": 0.8, "h3": 0.8}),
    ("fractional", {"h1": 0.8, "h2": 1.0, "h3": 0.8}),
    ("smoothed_riesz", {"beta": 3.0}),
])
def test_invalid_parameters(family, params):
    with pytest.raises(ValueError):
        K.make_kernel(family, **params)


def test_unknown_family_and_params():
    with pytest.raises(ValueError):
        K.make_kernel("gaussian", beta=1.0)
    with pytest.raises(ValueError):
        K.make_kernel("riesz", alpha=1.0)


def test_fractional_warning_flag():
    with pytest.warns(RuntimeWarning):
        k = K.make_kernel("fractional", h1=0.6, h2=0.6, h3=0.6)
    assert k.warning
    assert K.predicted_exponents(k).nu_sup is None


def test_kernel_spec_is_immutable(riesz1):
    with pytest.raises(Exception):
        riesz1.family = "bessel"
