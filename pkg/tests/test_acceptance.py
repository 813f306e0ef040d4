"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s -v``.  Every tolerance is
pinned below; nothing is tuned at run time.
"""

import json
import math
import time

import numpy as np
import pytest
from scipy import stats

from wavelab import cli, moments as M, quadrature as Q, regularity as R, simulator as S
from wavelab.kernels import make_kernel
from wavelab.wavekernel import gg_functional_physical, gg_physical_riesz, sample_sphere

DIAG = np.ones(3) / math.sqrt(3.0)

# pinned thresholds
KS_MAX, KS_PAIRS, KS_SECONDS = 0.01, 100_000, 10.0
DUAL_TOL = {"riesz": 1e-3, "bessel": 1e-3, "smoothed_riesz": 5e-3}
DUAL_SECONDS = 60.0
SMALL_BALL_REL, SMALL_BALL_SLOPE = 1e-3, 1e-3
SPATIAL_WINDOW, SPATIAL_SECONDS = (0.70, 0.90), 300.0
SCALING_REL, TEMPORAL_WINDOW = 1e-3, (0.70, 0.90)
MC_LAGS_REQUIRED, MC_Z, HOLDER_TARGET, HOLDER_TOL = 7, 3.0, 0.4, 0.15
SKEW_MAX, KURT_MAX, MC_SECONDS = 0.1, 0.2, 600.0
TC_MIN, NU_SP_WINDOW = 0.8, (0.4, 0.6)
LINEARITY_CASES = 100


def report(capsys, number, ok, detail):
    line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'} | {detail}"
    with capsys.disabled():
        print("\n" + line)
    return ok


def test_criterion_1_sphere_convolution_law(capsys):
    start = time.perf_counter()
    rng = np.random.default_rng(20240601)
    x = sample_sphere(1.5, rng, KS_PAIRS)
    y = sample_sphere(1.0, rng, KS_PAIRS)
    r = np.linalg.norm(x + y, axis=1)
    cdf = lambda v: np.clip((v * v - 0.25) / 6.0, 0.0, 1.0)
    ks = stats.kstest(r, cdf).statistic
    elapsed = time.perf_counter() - start
    ok = ks < KS_MAX and elapsed < KS_SECONDS
    assert report(capsys, 1, ok, f"KS={ks:.5f} (< {KS_MAX}), {elapsed:.2f}s (< {KS_SECONDS}s)")


def test_criterion_2_dual_computation(capsys):
    start = time.perf_counter()
    lines, ok = [], True
    for beta in (0.5, 1.0, 1.5):
        k = make_kernel("riesz", beta=beta)
        closed = 0.5 * 2.0 ** (2.0 - beta) / (2.0 - beta)
        assert gg_physical_riesz(beta, 1.0, 1.0) == pytest.approx(closed, rel=1e-14)
        spec = M.gg_functional_spectral(k, 1.0, 1.0).value
        dev = abs(spec - closed) / closed
        ok &= dev <= DUAL_TOL["riesz"]
        lines.append(f"riesz b={beta}: {spec:.6f} vs {closed:.6f} dev={dev:.1e}")
    for fam, kw in (("bessel", {"alpha": 2.0}), ("smoothed_riesz", {"beta": 1.0})):
        k = make_kernel(fam, **kw)
        phys = gg_functional_physical(k, 1.0, 1.0).value
        spec = M.gg_functional_spectral(k, 1.0, 1.0).value
        dev = abs(spec - phys) / abs(phys)
        ok &= dev <= DUAL_TOL[fam]
        lines.append(f"{fam}: dev={dev:.1e}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < DUAL_SECONDS
    assert report(capsys, 2, ok, "; ".join(lines) + f"; {elapsed:.1f}s")


def test_criterion_3_riesz_small_ball(capsys):
    hs = [2.0 ** -j for j in range(3, 9)]
    ok, parts = True, []
    for beta in (0.5, 1.0):
        k = make_kernel("riesz", beta=beta)
        vals = np.array([R.small_ball_integral(k, h).value for h in hs])
        exact = np.array([4 * math.pi * h ** (2 - beta) / (2 - beta) for h in hs])
        rel = float(np.max(np.abs(vals / exact - 1)))
        slope = R.fit_exponent(hs, vals).slope
        ok &= rel <= SMALL_BALL_REL and abs(slope - (2 - beta)) <= SMALL_BALL_SLOPE
        parts.append(f"b={beta}: max rel={rel:.1e}, slope={slope:.6f}")
    assert report(capsys, 3, ok, "; ".join(parts))


def test_criterion_4_fractional_spatial_exponent(capsys, frac08):
    start = time.perf_counter()
    lags = [2.0 ** -j for j in range(9, 2, -1)]
    vals = [M.spatial_variogram_exact(frac08, 1.0, h * DIAG).value for h in lags]
    slope = R.fit_exponent(lags, vals).slope
    elapsed = time.perf_counter() - start
    ok = SPATIAL_WINDOW[0] <= slope <= SPATIAL_WINDOW[1] and elapsed < SPATIAL_SECONDS
    assert report(capsys, 4, ok, f"slope={slope:.4f} in {SPATIAL_WINDOW} (2*kappa_bar=0.8), "
                                 f"{elapsed:.1f}s")


def test_criterion_5_exact_scaling(capsys, frac08):
    target = 2.0 ** (2 * frac08.kappa_bar + 1)
    rv = M.variance(frac08, 2.0).value / M.variance(frac08, 1.0).value
    rz = M.temporal_Z1(frac08, 0.0, 0.02).value / M.temporal_Z1(frac08, 0.0, 0.01).value
    hs = [2.0 ** -j for j in range(10, 4, -1)]
    inc = [M.temporal_increment_variance(frac08, 0.5, 0.5 + h).value for h in hs]
    slope = R.fit_exponent(hs, inc).slope
    ok = (abs(rv / target - 1) <= SCALING_REL and abs(rz / target - 1) <= SCALING_REL
          and TEMPORAL_WINDOW[0] <= slope <= TEMPORAL_WINDOW[1])
    assert report(capsys, 5, ok, f"target={target:.6f}, variance ratio={rv:.6f}, "
                                 f"Z1 ratio={rz:.6f}, temporal slope={slope:.4f}")


def test_criterion_6_simulator_law(capsys, frac08):
    start = time.perf_counter()
    modes = S.build_mode_set(frac08, cutoff=4096.0, resolution=16, angular_nodes=128,
                             nodes_per_cell=4)
    assert modes.mode_count == 4096
    lags = [2.0 ** -j for j in range(7, -1, -1)]
    sample = S.simulate_field(modes, [1.0], S.dyadic_lag_points(DIAG, lags), 2000, seed=7)
    mc = S.empirical_variogram(sample, 0, DIAG, lags)
    ref = S.truncated_variogram(modes, 1.0, DIAG, lags)
    z = (mc.values - ref.values) / mc.stderr
    within = int(np.sum(np.abs(z) <= MC_Z))
    holder = S.estimate_holder(mc).slope / 2.0
    g = S.gaussianity(sample)
    elapsed = time.perf_counter() - start
    ok = (within >= MC_LAGS_REQUIRED and abs(holder - HOLDER_TARGET) <= HOLDER_TOL
          and abs(g["pooled_skew"]) < SKEW_MAX and abs(g["pooled_excess_kurtosis"]) < KURT_MAX
          and elapsed < MC_SECONDS)
    assert report(capsys, 6, ok,
                  f"{within}/8 lags within {MC_Z} stderr, Hoelder={holder:.4f}, "
                  f"pooled skew={g['pooled_skew']:.4f}, pooled excess kurtosis="
                  f"{g['pooled_excess_kurtosis']:.4f} (max marginal {g['max_abs_excess_kurtosis']:.3f}), "
                  f"captured mass={modes.captured_mass:.3f}, {elapsed:.1f}s")


def test_criterion_7_condition_sweeps(capsys, riesz1, bessel15):
    tc1 = R.condition_sweep(riesz1, "TC1")
    tc2 = R.condition_sweep(riesz1, "TC2")
    nu = R.condition_sweep(bessel15, "NU")
    sp1 = R.condition_sweep(bessel15, "SP1")
    parts = {
        "riesz TC1": tc1.fit.slope >= TC_MIN,
        "riesz TC2": tc2.fit.slope >= TC_MIN,
        "bessel NU": NU_SP_WINDOW[0] <= nu.fit.slope <= NU_SP_WINDOW[1],
        "bessel SP1": NU_SP_WINDOW[0] <= sp1.fit.slope <= NU_SP_WINDOW[1],
    }
    # informational only: TC1 behaves like h log^2(1/h), so deeper windows approach 1
    deep = [R.condition_sweep(riesz1, "TC1", probe_grid=[2.0 ** -j for j in range(a, a + 6)])
            for a in (8, 12, 16)]
    deep_text = ", ".join(f"2^-{a}..2^-{a + 5}: {d.fit.slope:.3f}" for a, d in zip((8, 12, 16), deep))
    detail = (f"riesz TC1={tc1.fit.slope:.4f} (deeper windows, not scored: {deep_text}), "
              f"TC2={tc2.fit.slope:.4f} (>= {TC_MIN}); "
              f"bessel NU={nu.fit.slope:.4f}, SP1={sp1.fit.slope:.4f} (in {NU_SP_WINDOW}); "
              f"failing: {[k for k, v in parts.items() if not v] or 'none'}")
    assert report(capsys, 7, all(parts.values()), detail)


def _run_cli(argv, capsys):
    code = cli.main(argv)
    capsys.readouterr()
    return code


def _files(path):
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


def test_criterion_8_determinism(capsys, tmp_path):
    runs = {
        "variogram": ["variogram", "--kernel", "fractional", "--h1", "0.8", "--h2", "0.8",
                      "--h3", "0.8", "--mc", "--seed", "11", "--realizations", "200",
                      "--modes", "1024", "--cutoff", "1024", "--lags", "0.0625,0.125,0.25"],
        "simulate": ["simulate", "--kernel", "bessel", "--alpha", "2", "--seed", "5",
                     "--realizations", "64", "--modes", "512", "--cutoff", "256",
                     "--times", "0.5,1", "--lags", "0.125,0.25"],
    }
    ok, parts = True, []
    for name, argv in runs.items():
        a, b, c = tmp_path / f"{name}1", tmp_path / f"{name}4", tmp_path / f"{name}r"
        codes = [_run_cli(argv + ["--out", str(a)], capsys),
                 _run_cli(argv + ["--out", str(b), "--workers", "4"], capsys),
                 _run_cli([name, "--config", str(a / "config.txt"), "--out", str(c),
                           "--workers", "3"], capsys)]
        fa, fb, fc = _files(a), _files(b), _files(c)
        same = codes == [0, 0, 0] and fa == fb == fc
        seed = json.loads(fa[f"{name}.json"])["seed"]
        ok &= same
        parts.append(f"{name}: {len(fa)} files byte-identical across workers 1/4/3 and "
                     f"config rerun={same} (seed {seed})")
    assert report(capsys, 8, ok, "; ".join(parts))


def test_criterion_9_quadrature_self_convergence(capsys, riesz1, bessel2, frac08, smoothed1):
    certs = []
    for k in (riesz1, bessel2, frac08, smoothed1):
        certs.append(M.variance(k, 1.0).certificate)
        certs.append(M.temporal_Z2(k, 0.5, 0.6).certificate)
        certs.append(M.gg_functional_spectral(k, 1.0, 0.5).certificate)
        certs.append(M.spatial_variogram_exact(k, 1.0, 0.1 * DIAG).certificate)
        certs.append(k.density.h2_certificate.certificate)
    for k in (riesz1, bessel2, smoothed1):
        certs.append(gg_functional_physical(k, 1.0, 0.5).certificate)
        certs.append(R.small_ball_integral(k, 0.5).certificate)
    worst = max(c.delta / c.tolerance for c in certs)
    conv_ok = all(c.delta < c.tolerance for c in certs)

    basis = [
        lambda x: np.exp(-np.linalg.norm(x, axis=1)),
        lambda x: np.linalg.norm(x, axis=1) ** -1.0 * np.exp(-np.sum(x * x, axis=1)),
        lambda x: 1.0 / (1.0 + np.sum(x * x, axis=1)),
        lambda x: (1.0 + x[:, 0] ** 2) * np.exp(-np.linalg.norm(x, axis=1)),
    ]
    spec = Q.QuadratureSpec(radial_nodes=128, sphere_nodes=110, tolerance=1e-8)
    lin_ok = pos_ok = True
    for seed in range(LINEARITY_CASES):
        rng = np.random.default_rng(seed)
        i, j = rng.choice(len(basis), 2, replace=False)
        a, b = rng.uniform(0.1, 3.0, 2)
        hi = rng.uniform(0.5, 3.0)
        gi = Q.integrate_shell_weighted(basis[i], 0.0, hi, 1.0, spec)
        gj = Q.integrate_shell_weighted(basis[j], 0.0, hi, 1.0, spec)
        gc = Q.integrate_shell_weighted(lambda x: a * basis[i](x) + b * basis[j](x), 0.0, hi, 1.0,
                                        spec)
        expected = a * gi.value + b * gj.value
        lin_ok &= abs(gc.value - expected) <= 2 * spec.tolerance * abs(expected)
        pos_ok &= min(gi.value, gj.value, gc.value) > 0
        conv_ok &= all(r.certificate.delta < spec.tolerance for r in (gi, gj, gc))
    ok = conv_ok and lin_ok and pos_ok
    assert report(capsys, 9, ok, f"{len(certs)} functional certificates (worst delta/tol="
                                 f"{worst:.2e}); {LINEARITY_CASES} random combinations: "
                                 f"linearity={lin_ok}, positivity={pos_ok}, "
                                 f"self-convergence={conv_ok}")
