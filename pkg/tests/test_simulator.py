import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavelab import simulator as S
from wavelab.kernels import make_kernel

import oracles

DIAG = np.ones(3) / math.sqrt(3.0)


@pytest.fixture(scope="module")
def riesz_modes(riesz1):
    return S.build_mode_set(riesz1, cutoff=256.0, resolution=12, angular_nodes=50)


@pytest.fixture(scope="module")
def frac_modes(frac08):
    return S.build_mode_set(frac08, cutoff=1024.0, resolution=12, angular_nodes=32)


# ---------------------------------------------------------------------------
# time covariance


@pytest.mark.parametrize("r", [1e-3, 0.1, 0.3, 1.0, 7.5, 40.0])
@pytest.mark.parametrize("times", [(0.5,), (0.25, 1.0), (0.1, 0.6, 1.3)])
def test_time_covariance_against_oracle(r, times):
    sig = S.mode_time_covariance(r, times)
    for j, tj in enumerate(times):
        for l, tl in enumerate(times):
            ref = oracles.time_covariance_raw(r, tj, tl)
            assert sig[j, l] == pytest.approx(ref, rel=1e-9, abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-4, 100.0), st.lists(st.floats(0.01, 3.0), min_size=1, max_size=4))
def test_time_covariance_is_psd(r, times):
    times = sorted(times)
    sig = S.mode_time_covariance(r, times)
    assert np.allclose(sig, sig.T)
    assert np.linalg.eigvalsh(sig).min() >= -1e-10 * np.abs(sig).max()


def test_time_covariance_branch_continuity():
    # both sides of the small r t switch
    t = (0.5, 1.0)
    lo = S.mode_time_covariance(0.25 * (1 - 1e-9), t)
    hi = S.mode_time_covariance(0.25 * (1 + 1e-9), t)
    np.testing.assert_allclose(lo, hi, rtol=1e-7)


def test_time_covariance_errors():
    with pytest.raises(ValueError):
        S.mode_time_covariance(0.0, (1.0,))
    with pytest.raises(ValueError):
        S.mode_time_covariance(1.0, (1.0, 0.5))
    with pytest.raises(ValueError):
        S.mode_time_covariance(1.0, ())
    with pytest.raises(ValueError):
        S._psd_factor(np.array([[[1.0, 2.0], [2.0, 1.0]]]))


# ---------------------------------------------------------------------------
# mode sets


def test_mode_set_weights(riesz_modes, riesz1):
    assert np.all(riesz_modes.weights > 0)
    assert np.all(riesz_modes.radii <= riesz_modes.cutoff)
    # Riesz beta=1: mu(|xi| <= L) = 4 pi c L with c = (2 pi)^-3 c3(1)
    expected = 4 * math.pi * oracles.riesz_density_constant(1.0) * riesz_modes.cutoff
    assert riesz_modes.total_weight == pytest.approx(expected, rel=0.02)


def test_mode_set_half_sphere(riesz_modes):
    xi = riesz_modes.frequencies
    # no mode has its antipode in the set
    key = {tuple(np.round(v, 9)) for v in xi}
    assert not any(tuple(np.round(-v, 9)) in key for v in xi)


def test_mode_set_resolution_refinement(riesz1):
    coarse = S.build_mode_set(riesz1, 256.0, resolution=12, angular_nodes=50)
    fine = S.build_mode_set(riesz1, 256.0, resolution=24, angular_nodes=50)
    a, b = S.truncated_variance(coarse, 1.0), S.truncated_variance(fine, 1.0)
    assert a == pytest.approx(b, rel=0.01)


def test_mode_set_captured_mass_grows(riesz1):
    low = S.build_mode_set(riesz1, 2.0, resolution=8, angular_nodes=26)
    high = S.build_mode_set(riesz1, 4096.0, resolution=16, angular_nodes=26)
    assert 0 < low.captured_mass < high.captured_mass <= 1.0
    assert low.warning is not None and high.warning is None


def test_mode_set_errors(riesz1, frac08):
    with pytest.raises(ValueError):
        S.build_mode_set(riesz1, 0.0)
    with pytest.raises(ValueError):
        S.build_mode_set(riesz1, 64.0, resolution=4)
    with pytest.raises(ValueError):
        S.build_mode_set(frac08, 64.0, scheme="lebedev")
    with pytest.raises(ValueError):
        S.build_mode_set(riesz1, 64.0, scheme="grid")


def test_mode_set_is_read_only(riesz_modes):
    with pytest.raises(ValueError):
        riesz_modes.weights[0] = 1.0
    d = riesz_modes.as_dict()
    assert d["mode_count"] == riesz_modes.mode_count


def test_fractional_modes_avoid_axes(frac_modes):
    assert frac_modes.grid["scheme"] == "jacobi"
    assert np.all(np.abs(frac_modes.frequencies) > 0)


# ---------------------------------------------------------------------------
# truncated references


@pytest.mark.parametrize("cutoff", [256.0, 4096.0])
@pytest.mark.parametrize("resolution, per_cell, rel", [(16, 4, 2e-4), (64, 8, 1e-5)])
def test_truncated_variance_riesz(riesz1, cutoff, resolution, per_cell, rel):
    modes = S.build_mode_set(riesz1, cutoff, resolution=resolution, angular_nodes=6,
                             nodes_per_cell=per_cell)
    # 1/2 minus the tail int_L^inf (2/pi) (2r - sin 2r) / (4 r^3) dr = 1/(pi L) + O(L^-3)
    assert S.truncated_variance(modes, 1.0) == pytest.approx(0.5 - 1 / (math.pi * cutoff), rel=rel)


def test_truncation_monotone_in_cutoff(riesz1):
    vals = [S.truncated_variance(S.build_mode_set(riesz1, L, resolution=12, angular_nodes=26), 1.0)
            for L in (64.0, 256.0, 1024.0)]
    assert vals[0] < vals[1] < vals[2] < 0.5


def test_truncated_variogram_riesz_exponent(riesz1):
    modes = S.build_mode_set(riesz1, 4096.0, resolution=16, angular_nodes=26)
    lags = [2.0 ** -j for j in range(7, 1, -1)]
    fit = S.estimate_holder(S.truncated_variogram(modes, 1.0, DIAG, lags))
    assert fit.slope / 2 == pytest.approx(0.5, abs=0.05)


def test_truncated_covariance_consistency(frac_modes):
    assert S.truncated_covariance(frac_modes, 1.0, 1.0, (0, 0, 0), (0, 0, 0)) == pytest.approx(
        S.truncated_variance(frac_modes, 1.0), rel=1e-14)
    x = np.array([0.1, 0.0, 0.0])
    v = S.truncated_variogram(frac_modes, 1.0, (1, 0, 0), [0.1]).values[0]
    c0 = S.truncated_variance(frac_modes, 1.0)
    c1 = S.truncated_covariance(frac_modes, 1.0, 1.0, x, (0, 0, 0))
    assert v == pytest.approx(2 * c0 - 2 * c1, rel=1e-10)


# ---------------------------------------------------------------------------
# sampling


def test_simulate_determinism_and_workers(frac_modes):
    pts = S.dyadic_lag_points(DIAG, [0.25, 0.5])
    a = S.simulate_field(frac_modes, [0.5, 1.0], pts, 40, seed=5, chunk=7)
    b = S.simulate_field(frac_modes, [0.5, 1.0], pts, 40, seed=5, workers=4, chunk=3)
    assert a.realizations.tobytes() == b.realizations.tobytes()
    c = S.simulate_field(frac_modes, [0.5, 1.0], pts, 40, seed=6)
    assert not np.array_equal(a.realizations, c.realizations)


def test_simulate_prefix_stability(frac_modes):
    pts = np.zeros((1, 3))
    a = S.simulate_field(frac_modes, [1.0], pts, 10, seed=1)
    b = S.simulate_field(frac_modes, [1.0], pts, 25, seed=1)
    assert np.array_equal(a.realizations, b.realizations[:10])


def test_simulate_t_zero_vanishes(frac_modes):
    s = S.simulate_field(frac_modes, [0.0, 1.0], np.zeros((2, 3)), 5, seed=0)
    assert np.all(s.realizations[:, 0, :] == 0.0)


def test_binary_roundtrip(frac_modes):
    s = S.simulate_field(frac_modes, [0.5, 1.0], S.dyadic_lag_points((1, 0, 0), [0.5]), 3, seed=9)
    back = S.FieldSample.from_bytes(s.to_bytes())
    assert back.realizations.tobytes() == s.realizations.tobytes()
    assert back.seed == 9 and back.mode_count == frac_modes.mode_count
    with pytest.raises(ValueError):
        S.FieldSample.from_bytes(b"garbage!" + s.to_bytes()[8:])


def test_csv_export(frac_modes):
    s = S.simulate_field(frac_modes, [1.0], np.zeros((1, 3)), 2, seed=0)
    lines = s.to_csv().splitlines()
    assert lines[0] == "realization,t,x1,x2,x3,u"
    assert len(lines) == 3
    assert float(lines[1].split(",")[-1]) == s.realizations[0, 0, 0]


def test_sample_shape_validation():
    with pytest.raises(ValueError):
        S.FieldSample(np.array([1.0]), np.zeros((2, 3)), np.zeros((1, 2, 2)), 0, 1)


def test_law_on_probe_points(frac_modes):
    # sample covariance matrix vs truncated reference on four points
    pts = S.dyadic_lag_points(DIAG, [0.125, 0.25, 0.5])
    s = S.simulate_field(frac_modes, [1.0], pts, 4000, seed=21)
    u = s.realizations[:, 0, :]
    assert np.all(np.abs(u.mean(axis=0)) < 3.5 * u.std(axis=0) / math.sqrt(s.n_real))
    emp = np.cov(u, rowvar=False)
    ref = np.array([[S.truncated_covariance(frac_modes, 1.0, 1.0, x, y) for y in pts] for x in pts])
    # stderr of a Gaussian covariance estimate: sqrt((C_ii C_jj + C_ij^2) / n)
    se = np.sqrt((np.outer(np.diag(ref), np.diag(ref)) + ref ** 2) / s.n_real)
    assert np.all(np.abs(emp - ref) < 4 * se)


# ---------------------------------------------------------------------------
# variogram estimation


def test_empirical_variogram_constant_field():
    pts = S.dyadic_lag_points((1, 0, 0), [0.5, 1.0])
    s = S.FieldSample(np.array([1.0]), pts, np.full((5, 1, 3), 2.5), 0, 1)
    curve = S.empirical_variogram(s, 0, (1, 0, 0), [0.0, 0.5, 1.0])
    np.testing.assert_array_equal(curve.values, [0.0, 0.0, 0.0])


def test_empirical_variogram_missing_pairs():
    pts = S.dyadic_lag_points((1, 0, 0), [0.5])
    s = S.FieldSample(np.array([1.0]), pts, np.zeros((2, 1, 2)), 0, 1)
    with pytest.raises(ValueError, match="1 grid pairs missing"):
        S.empirical_variogram(s, 0, (1, 0, 0), [0.5, 0.25])


def test_empirical_variogram_base_points(frac_modes):
    base = np.array([[0.0, 0.0, 0.0], [0.3, 0.1, 0.0]])
    pts = S.dyadic_lag_points((0, 1, 0), [0.25], base_points=base)
    s = S.simulate_field(frac_modes, [1.0], pts, 200, seed=2)
    curve = S.empirical_variogram(s, 0, (0, 1, 0), [0.25], base_points=base)
    ref = S.truncated_variogram(frac_modes, 1.0, (0, 1, 0), [0.25]).values[0]
    assert abs(curve.values[0] - ref) < 4 * curve.stderr[0]


@pytest.mark.parametrize("holder", [0.2, 0.4, 0.7])
def test_estimate_holder_exact_power(holder):
    lags = np.array([0.0] + [2.0 ** -j for j in range(8, 0, -1)])
    curve = S.VariogramCurve(lags, np.where(lags > 0, 3 * lags ** (2 * holder), 0.0), None,
                             np.array([1.0, 0, 0]), "truncated")
    assert S.estimate_holder(curve).slope / 2 == pytest.approx(holder, abs=1e-12)


def test_gaussianity_of_normal_sample():
    rng = np.random.default_rng(0)
    s = S.FieldSample(np.array([1.0]), np.zeros((3, 3)), rng.standard_normal((4000, 1, 3)), 0, 1)
    g = S.gaussianity(s)
    assert g["marginals"] == 3
    assert g["max_abs_skew"] < 0.15 and g["max_abs_excess_kurtosis"] < 0.3
    assert abs(g["pooled_skew"]) < 0.1 and abs(g["pooled_excess_kurtosis"]) < 0.2


def test_gaussianity_detects_heavy_tails():
    rng = np.random.default_rng(1)
    s = S.FieldSample(np.array([1.0]), np.zeros((1, 3)),
                      rng.standard_t(4, size=(4000, 1, 1)), 0, 1)
    assert S.gaussianity(s)["pooled_excess_kurtosis"] > 0.5
