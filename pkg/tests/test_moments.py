import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavelab import moments as M
from wavelab.quadrature import QuadratureSpec
from wavelab.regularity import fit_exponent
from wavelab.quadrature import gauss_legendre
from wavelab.wavekernel import gg_physical_riesz, sphere_conv_density

import oracles

DIAG = np.ones(3) / math.sqrt(3.0)


@pytest.mark.parametrize("beta, t", [(1.0, 1.0), (1.0, 0.4), (0.5, 0.7), (1.5, 1.3)])
def test_riesz_variance_against_oracle(beta, t):
    from wavelab.kernels import make_kernel
    k = make_kernel("riesz", beta=beta)
    assert M.variance(k, t).value == pytest.approx(oracles.riesz_variance_raw(beta, t), rel=1e-4)


@pytest.mark.parametrize("beta, t, tbar", [(1.0, 0.5, 0.6), (0.5, 0.5, 0.6), (1.0, 1.0, 1.25)])
def test_riesz_z2_against_oracle(beta, t, tbar):
    from wavelab.kernels import make_kernel
    k = make_kernel("riesz", beta=beta)
    got = M.temporal_Z2(k, t, tbar).value
    assert got == pytest.approx(oracles.riesz_z2_raw(beta, t, tbar), rel=1e-4)


def test_riesz_one_closed_values(riesz1):
    # frozen from the oracle; Riesz beta=1 variance is t^2/2
    assert M.variance(riesz1, 1.0).value == pytest.approx(0.5, rel=1e-6)
    assert M.variance(riesz1, 2.0).value == pytest.approx(2.0, rel=1e-6)
    assert M.temporal_Z2(riesz1, 1.0, 1.2).value == pytest.approx(0.2, rel=1e-5)
    assert M.temporal_increment_variance(riesz1, 1.0, 1.2).value == pytest.approx(0.22, rel=1e-5)


def test_zero_cases(frac08):
    assert M.variance(frac08, 0.0).value == 0.0
    assert M.spatial_variogram_exact(frac08, 0.0, (0.1, 0.0, 0.0)).value == 0.0
    assert M.spatial_variogram_exact(frac08, 1.0, (0.0, 0.0, 0.0)).value == 0.0
    assert M.temporal_Z2(frac08, 0.0, 0.3).value == 0.0
    assert M.temporal_Z2(frac08, 0.4, 0.4).value == 0.0


def test_argument_validation(riesz1):
    with pytest.raises(ValueError):
        M.variance(riesz1, -1.0)
    with pytest.raises(ValueError):
        M.temporal_Z1(riesz1, 1.0, 0.5)
    with pytest.raises(ValueError):
        M.gg_functional_spectral(riesz1, 0.0, 1.0)


def test_fractional_exact_scaling(frac08):
    target = 2.0 ** 1.8
    assert M.variance(frac08, 2.0).value / M.variance(frac08, 1.0).value == pytest.approx(target, rel=1e-3)
    ratio = M.temporal_Z1(frac08, 0.0, 0.02).value / M.temporal_Z1(frac08, 0.0, 0.01).value
    assert ratio == pytest.approx(target, rel=1e-3)


def test_z1_shift_invariance(frac08):
    # Z1 depends on tbar - t only; dyadic times give identical differences
    assert M.temporal_Z1(frac08, 0.0, 0.25).value == M.temporal_Z1(frac08, 0.5, 0.75).value
    assert M.temporal_Z1(frac08, 0.0, 0.25).value == pytest.approx(
        M.temporal_Z1(frac08, 0.3, 0.55).value, rel=1e-12)


def test_variogram_symmetry_and_bound(frac08):
    x = np.array([0.05, -0.02, 0.03])
    a = M.spatial_variogram_exact(frac08, 1.0, x).value
    b = M.spatial_variogram_exact(frac08, 1.0, -x).value
    assert a == b
    assert 0 < a <= 4.0 * M.variance(frac08, 1.0).value


def test_variogram_monotone_in_lag(bessel2):
    vals = [M.spatial_variogram_exact(bessel2, 1.0, h * DIAG).value for h in (0.01, 0.02, 0.04, 0.08)]
    assert all(np.diff(vals) > 0)


def test_riesz_variogram_value(riesz1):
    # frozen: E|u(1,x)-u(1,0)|^2 at |x| = 0.3
    assert M.spatial_variogram_exact(riesz1, 1.0, (0.3, 0.0, 0.0)).value == pytest.approx(0.1425, rel=1e-3)


def test_increment_decomposition(bessel2):
    z1 = M.temporal_Z1(bessel2, 0.5, 0.7).value
    z2 = M.temporal_Z2(bessel2, 0.5, 0.7).value
    inc = M.temporal_increment_variance(bessel2, 0.5, 0.7)
    assert inc.value == z1 + z2
    assert inc.certificate.converged


def test_increment_via_covariance(riesz1):
    # E|u(tb)-u(t)|^2 = var(t) + var(tb) - 2 cov; cov(t, tb) = int gg over s in [0, t]
    t, tb = 0.6, 0.9
    inc = M.temporal_increment_variance(riesz1, t, tb).value
    x, w = np.polynomial.legendre.leggauss(40)
    s = 0.5 * t * (x + 1)
    cov = 0.5 * t * sum(wi * gg_physical_riesz(1.0, tb - si, t - si) for si, wi in zip(s, w))
    expected = M.variance(riesz1, t).value + M.variance(riesz1, tb).value - 2 * cov
    assert inc == pytest.approx(expected, rel=1e-4)


def test_shifted_gg_at_zero_is_plain(smoothed1):
    a = M.shifted_gg_functional(smoothed1, 1.0, 0.5, (0.0, 0.0, 0.0)).value
    b = M.gg_functional_spectral(smoothed1, 1.0, 0.5).value
    assert a == b


@pytest.mark.parametrize("s, t", [(1.0, 1.0), (0.7, 0.4)])
def test_shifted_gg_against_physical(riesz1, s, t):
    # s t E|s xi - t eta + w|^-1; the spherical mean of |r n + w|^-1 is 1/max(r, |w|)
    w = np.array([0.1, 0.0, 0.0])
    lo, hi = abs(s - t), s + t
    x, wx = gauss_legendre(200)
    r = 0.5 * (hi - lo) * (x + 1) + lo
    dens = 4 * math.pi * r * r * sphere_conv_density(s, t, r)
    phys = s * t * 0.5 * (hi - lo) * float(np.sum(wx * dens / np.maximum(r, 0.1)))
    assert M.shifted_gg_functional(riesz1, s, t, w).value == pytest.approx(phys, rel=1e-3)


def test_fractional_spatial_slope(frac08):
    lags = [2.0 ** -j for j in range(9, 2, -1)]
    vals = [M.spatial_variogram_exact(frac08, 1.0, h * DIAG).value for h in lags]
    fit = fit_exponent(lags, vals)
    assert 0.70 <= fit.slope <= 0.90
    assert fit.slope == pytest.approx(0.7983, abs=2e-3)


def test_temporal_increment_slope(frac08):
    hs = [2.0 ** -j for j in range(10, 4, -1)]
    vals = [M.temporal_increment_variance(frac08, 0.5, 0.5 + h).value for h in hs]
    fit = fit_exponent(hs, vals)
    assert 0.70 <= fit.slope <= 0.90


@settings(max_examples=20, deadline=None)
@given(st.floats(0.05, 2.0), st.floats(0.05, 2.0))
def test_riesz_one_variance_law(t, factor):
    from wavelab.kernels import make_kernel
    k = make_kernel("riesz", beta=1.0)
    assert M.variance(k, t).value == pytest.approx(t * t / 2.0, rel=1e-4)


def test_moment_result_float(riesz1):
    r = M.variance(riesz1, 1.0, QuadratureSpec(tolerance=1e-6))
    assert float(r) == r.value and r.method == "spectral"
