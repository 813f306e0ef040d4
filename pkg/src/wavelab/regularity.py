"""Numerical checks of the Hölder-continuity hypotheses on a kernel.

Each condition is an integral functional of the covariance ``f`` that should
scale like a power of a small parameter (a radius ``h``, a shift ``|w|`` or a
time step ``h``).  The drivers evaluate it on a dyadic probe grid, fit the
log-log slope, and compare it with the supremum predicted for the family.

Condition ids
-------------
``H1``   ``int_{|x| <= R} f(x) / |x| dx`` is finite.
``H2``   ``int mu(dxi) / (1 + |xi|^2)`` is finite.
``NU``   ``int_{|z| <= h} f(z) / |z| dz <= C h^nu``.
``SP1``  ``int_{|z| <= 2T} |f(z + w) - f(z)| / |z| dz <= C |w|^gamma``.
``SP2``  ``int_{|z| <= 2T} |f(z + w) + f(z - w) - 2 f(z)| / |z| dz <= C |w|^gamma'``.
``TC1``  ``int_0^T int int |f((s+h)(xi+eta)) - f(s(xi+eta) + h eta)| s <= C h^rho1``.
``TC2``  ``int_0^T int int |f(s(xi+eta) + h(xi+eta)) - f(s(xi+eta) + h xi)
          - f(s(xi+eta) + h eta) + f(s(xi+eta))| s^2 <= C h^rho2``.

In SP1 and SP2 the measure ``1_{|z| <= 2T} |z|^{-1} dz`` is the weighting
measure often written ``rho(dz)``, and ``f(z + w) - f(z)`` is the shift
difference ``D_w f(z)``.  The time conditions integrate over two independent
uniform directions ``xi``, ``eta`` on the unit sphere (unnormalised surface
measure).

For radial kernels the spatial conditions reduce to two-dimensional integrals
in ``r = |z|`` and ``q = |z +- w|`` (the Jacobian of ``c -> q`` absorbs the
``1/|z|`` weight), and the time conditions depend on ``(xi, eta)`` only
through ``|xi + eta|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import optimize, stats

from .kernels import KernelSpec, predicted_exponents
from .quadrature import (
    QuadratureError,
    QuadratureSpec,
    certify,
    graded_rule,
    integrate_shell_weighted,
    integrate_sphere_product,
    pairwise_sum,
)
from .wavekernel import as_point

__all__ = [
    "CONDITION_IDS",
    "DEFAULT_SLACK",
    "MIN_R2",
    "CONDITION_SPEC",
    "ExponentFit",
    "ConditionReport",
    "HolderTable",
    "fit_exponent",
    "decide_verdict",
    "dyadic_grid",
    "check_H1",
    "check_H2",
    "small_ball_integral",
    "small_ball_growth",
    "modulus_L1_first",
    "modulus_L1_second",
    "time_condition_1",
    "time_condition_2",
    "condition_sweep",
    "predicted_holder",
]

CONDITION_IDS = ("H1", "H2", "SP1", "SP2", "TC1", "TC2", "NU")
DEFAULT_SLACK = 0.15
MIN_R2 = 0.98

#: Default quadrature settings for condition integrals (exponent fits do not
#: need more than three certified digits).
CONDITION_SPEC = QuadratureSpec(radial_nodes=256, sphere_nodes=110, tolerance=1e-3)

_DEFAULT_LEVELS = {
    "NU": range(3, 9),
    "SP1": range(3, 9),
    "SP2": range(3, 9),
    "TC1": range(2, 8),
    "TC2": range(2, 8),
}


# ---------------------------------------------------------------------------
# fits and verdicts


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares fit of ``log v = intercept + slope * log h``.

    Attributes
    ----------
    slope, intercept : float
    r2 : float
        Coefficient of determination in ``[0, 1]``.
    window : tuple of float
        ``(h_min, h_max)`` of the points used.
    stderr_slope : float
        Standard error of the slope from the residuals.
    n_points : int
    """

    slope: float
    intercept: float
    r2: float
    window: tuple[float, float]
    stderr_slope: float
    n_points: int

    def as_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r2,
                "window": list(self.window), "stderr_slope": self.stderr_slope,
                "n_points": self.n_points}


def fit_exponent(grid: Sequence[float], values: Sequence[float],
                 window: Optional[tuple[float, float]] = None) -> ExponentFit:
    """Ordinary least squares on ``(log h, log v)``.

    Parameters
    ----------
    grid : sequence of float
        Positive probe values ``h``.
    values : sequence of float
        Functional values at ``grid``.
    window : (h_min, h_max), optional
        Inclusive range of ``h`` to fit; the whole grid by default.

    Raises
    ------
    ValueError
        Fewer than three points in the window, or a nonpositive value there.
    """
    h = np.asarray(grid, dtype=float)
    v = np.asarray(values, dtype=float)
    if h.shape != v.shape:
        raise ValueError("grid and values must have the same length")
    if window is None:
        mask = np.ones(h.size, dtype=bool)
    else:
        lo, hi = window
        mask = (h >= lo) & (h <= hi)
    h, v = h[mask], v[mask]
    if h.size < 3:
        raise ValueError("need at least three points in the fit window")
    if np.any(h <= 0) or np.any(~(v > 0)):
        raise ValueError("probe values and functional values must be positive in the window")
    res = stats.linregress(np.log(h), np.log(v))
    r2 = float(res.rvalue ** 2) if np.isfinite(res.rvalue) else 1.0
    return ExponentFit(slope=float(res.slope), intercept=float(res.intercept),
                       r2=min(max(r2, 0.0), 1.0), window=(float(h.min()), float(h.max())),
                       stderr_slope=float(res.stderr), n_points=int(h.size))


def decide_verdict(fit: Optional[ExponentFit], predicted_sup: Optional[float],
                   slack: float = DEFAULT_SLACK, min_r2: float = MIN_R2) -> str:
    """``pass`` iff ``slope >= predicted_sup - slack`` and ``r2 >= min_r2``.

    Without a fit or without a predicted supremum the verdict is
    ``inconclusive``.
    """
    if fit is None or predicted_sup is None:
        return "inconclusive"
    ok = fit.slope >= predicted_sup - slack and fit.r2 >= min_r2
    return "pass" if ok else "fail"


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of one condition check.

    Attributes
    ----------
    condition_id : str
        One of :data:`CONDITION_IDS`.
    kernel : str
        Kernel name.
    probe_grid : tuple of float
        Strictly decreasing probes (radius, ``|w|`` or ``h``).
    integral_values : tuple of float
        Nonnegative values at the probes.
    fit : ExponentFit or None
    predicted_sup : float or None
    verdict : {"pass", "fail", "inconclusive"}
    slack : float
    direction : tuple of float or None
        Unit shift direction for SP1 and SP2.
    deltas : tuple of float
        Relative node-doubling change of each integral.
    note : str
    """

    condition_id: str
    kernel: str
    probe_grid: tuple[float, ...]
    integral_values: tuple[float, ...]
    fit: Optional[ExponentFit]
    predicted_sup: Optional[float]
    verdict: str
    slack: float = DEFAULT_SLACK
    direction: Optional[tuple[float, float, float]] = None
    deltas: tuple[float, ...] = field(default=())
    note: str = ""

    def __post_init__(self):
        if self.condition_id not in CONDITION_IDS:
            raise ValueError(f"unknown condition {self.condition_id!r}")
        if self.verdict not in ("pass", "fail", "inconclusive"):
            raise ValueError(f"unknown verdict {self.verdict!r}")
        g = np.asarray(self.probe_grid, dtype=float)
        if g.size > 1 and np.any(np.diff(g) >= 0):
            raise ValueError("probe grid must be strictly decreasing")
        if any(v < 0 for v in self.integral_values):
            raise ValueError("condition values must be nonnegative")

    def as_dict(self) -> dict:
        return {
            "condition_id": self.condition_id,
            "kernel": self.kernel,
            "probe_grid": list(self.probe_grid),
            "integral_values": list(self.integral_values),
            "fit": None if self.fit is None else self.fit.as_dict(),
            "predicted_sup": self.predicted_sup,
            "verdict": self.verdict,
            "slack": self.slack,
            "direction": None if self.direction is None else list(self.direction),
            "deltas": list(self.deltas),
            "note": self.note,
        }


def dyadic_grid(levels: Sequence[int]) -> tuple[float, ...]:
    """``(2^-k for k in levels)`` sorted strictly decreasing."""
    ks = sorted(set(int(k) for k in levels))
    return tuple(2.0 ** (-k) for k in ks)


# ---------------------------------------------------------------------------
# H1, H2, NU


def _report_single(cid: str, kernel: KernelSpec, probe: float, compute: Callable[[], object],
                   note: str = "") -> ConditionReport:
    try:
        integral = compute()
    except QuadratureError as exc:
        return ConditionReport(cid, kernel.name, (probe,), (), None, None, "inconclusive",
                               note=f"{note}{' ' if note else ''}quadrature: {exc}")
    value = float(integral.value)
    verdict = "pass" if np.isfinite(value) else "fail"
    return ConditionReport(cid, kernel.name, (probe,), (value,), None, None, verdict,
                           deltas=(integral.certificate.delta,), note=note)


def small_ball_integral(kernel: KernelSpec, radius: float,
                        spec: Optional[QuadratureSpec] = None):
    """Certified ``int_{|x| <= radius} f(x) / |x| dx`` (an :class:`Integral`)."""
    if not radius > 0:
        raise ValueError("radius must be positive")
    spec = spec or CONDITION_SPEC
    p = kernel.origin_singularity_exponent + 1.0
    if p >= 3.0:
        raise QuadratureError("f(x)/|x| is not integrable at the origin")

    def g(x):
        return kernel.f(x) / np.linalg.norm(x, axis=1)

    if kernel.is_radial:
        return integrate_shell_weighted(g, 0.0, radius, p, spec, isotropic=True)
    return integrate_shell_weighted(g, 0.0, radius, p, spec, axis_exponents=kernel.axis_exponents)


def check_H1(kernel: KernelSpec, radius: float = 1.0,
             spec: Optional[QuadratureSpec] = None) -> ConditionReport:
    """Finiteness of ``int_{|x| <= radius} f(x) / |x| dx``."""
    if kernel.origin_singularity_exponent + 1.0 >= 3.0:
        return ConditionReport("H1", kernel.name, (float(radius),), (), None, None, "fail",
                               note="f(x)/|x| is not integrable at the origin")
    return _report_single("H1", kernel, float(radius),
                          lambda: small_ball_integral(kernel, radius, spec))


def check_H2(kernel: KernelSpec) -> ConditionReport:
    """Finiteness of ``int mu(dxi) / (1 + |xi|^2)`` (certified at kernel construction)."""
    cert = kernel.density.h2_certificate
    if cert is None:
        verdict = "fail" if kernel.warning else "inconclusive"
        return ConditionReport("H2", kernel.name, (1.0,), (), None, None, verdict,
                               note="no certified value (integral diverges or was not certified)")
    return ConditionReport("H2", kernel.name, (1.0,), (float(cert.value),), None, None, "pass",
                           deltas=(cert.certificate.delta,))


def _sweep(cid: str, kernel: KernelSpec, grid: Sequence[float],
           evaluate: Callable[[float], object], predicted: Optional[float], slack: float,
           direction=None, note: str = "") -> ConditionReport:
    grid = tuple(sorted((float(h) for h in grid), reverse=True))
    values, deltas = [], []
    try:
        for h in grid:
            integral = evaluate(h)
            values.append(max(float(integral.value), 0.0))
            deltas.append(integral.certificate.delta)
    except QuadratureError as exc:
        msg = f"quadrature did not certify at probe {h!r}: {exc}"
        return ConditionReport(cid, kernel.name, grid[:len(values)], tuple(values), None,
                               predicted, "inconclusive", slack, direction, tuple(deltas),
                               f"{note}{' ' if note else ''}{msg}")
    try:
        fit = fit_exponent(grid, values)
    except ValueError as exc:
        return ConditionReport(cid, kernel.name, grid, tuple(values), None, predicted,
                               "inconclusive", slack, direction, tuple(deltas),
                               f"{note}{' ' if note else ''}fit: {exc}")
    return ConditionReport(cid, kernel.name, grid, tuple(values), fit, predicted,
                           decide_verdict(fit, predicted, slack), slack, direction,
                           tuple(deltas), note)


def small_ball_growth(kernel: KernelSpec, T: float = 1.0,
                      probe_grid: Optional[Sequence[float]] = None, *,
                      slack: float = DEFAULT_SLACK,
                      spec: Optional[QuadratureSpec] = None) -> ConditionReport:
    """Condition NU: growth of ``int_{|z| <= h} f(z) / |z| dz`` in ``h``.

    The predicted supremum is the family's ``nu`` (at most 1); a fitted slope
    above it is consistent with the bound.
    """
    grid = probe_grid if probe_grid is not None else dyadic_grid(_DEFAULT_LEVELS["NU"])
    if any(not (0 < h <= 2 * T) for h in grid):
        raise ValueError("probe radii must lie in (0, 2T]")
    pred = predicted_exponents(kernel).nu_sup
    return _sweep("NU", kernel, grid, lambda h: small_ball_integral(kernel, h, spec), pred, slack)


# ---------------------------------------------------------------------------
# SP1, SP2


def _radial_eval(kernel: KernelSpec, r: np.ndarray) -> np.ndarray:
    return np.asarray(kernel.f_radial(r.ravel()), dtype=float).reshape(r.shape)


def _outer_rule(d: float, R: float, sp: QuadratureSpec):
    n, L = sp.panel_order, sp.layers
    if d >= R:
        return graded_rule(0.0, R, L, "left", n)
    x1, w1 = graded_rule(0.0, d, L, "both", n)
    x2, w2 = graded_rule(d, R, L, "left", n)
    return np.concatenate([x1, x2]), np.concatenate([w1, w2])


def _segment_rule(lo: np.ndarray, cuts: np.ndarray, hi: np.ndarray, sp: QuadratureSpec):
    """Row-wise rule on ``[lo, hi]`` split at sorted ``cuts`` (NaN = unused).

    The first segment is graded toward ``lo``, where ``q f(q)`` may be nearly
    singular; the others use composite Gauss-Legendre rules.
    """
    n, L = sp.panel_order, sp.layers
    tg, wg = graded_rule(0.0, 1.0, L, "left", n)
    tp, wp = graded_rule(0.0, 1.0, 2, "both", n)
    cuts = np.where(np.isnan(cuts), hi[:, None], np.clip(cuts, lo[:, None], hi[:, None]))
    pts = np.concatenate([lo[:, None], np.sort(cuts, axis=1), hi[:, None]], axis=1)
    nodes, weights = [], []
    for k in range(pts.shape[1] - 1):
        a, b = pts[:, k:k + 1], pts[:, k + 1:k + 2]
        t, w = (tg, wg) if k == 0 else (tp, wp)
        nodes.append(a + (b - a) * t[None, :])
        weights.append((b - a) * w[None, :])
    return np.concatenate(nodes, axis=1), np.concatenate(weights, axis=1)


def _sign_changes(fun: Callable, lo: np.ndarray, hi: np.ndarray,
                  max_roots: int, scan: int = 64, iters: int = 60) -> np.ndarray:
    """Row-wise roots of ``fun`` on ``[lo, hi]`` by scan and bisection (NaN padded).

    ``fun(x, rows)`` evaluates rows ``rows`` (all rows when ``None``) at the
    matching rows of ``x``.
    """
    t = np.linspace(0.0, 1.0, scan + 1)[1:-1]
    x = lo[:, None] + (hi - lo)[:, None] * t[None, :]
    fx = fun(x, None)
    change = np.signbit(fx[:, :-1]) != np.signbit(fx[:, 1:])
    out = np.full((lo.size, max_roots), np.nan)
    for k in range(max_roots):
        has = change.any(axis=1)
        if not has.any():
            break
        idx = np.argmax(change, axis=1)
        rows = np.nonzero(has)[0]
        a = x[rows, idx[rows]].copy()
        b = x[rows, idx[rows] + 1].copy()
        fa = fx[rows, idx[rows]].copy()
        for _ in range(iters):
            m = 0.5 * (a + b)
            fm = fun(m[:, None], rows)[:, 0]
            left = np.signbit(fm) == np.signbit(fa)
            a = np.where(left, m, a)
            fa = np.where(left, fm, fa)
            b = np.where(left, b, m)
        out[rows, k] = 0.5 * (a + b)
        change[rows, idx[rows]] = False
    return out


def _check_shift(kernel: KernelSpec, T: float, w) -> float:
    if not T > 0:
        raise ValueError("T must be positive")
    d = float(np.linalg.norm(as_point(w)))
    if d > 1.0:
        raise ValueError("|w| must not exceed 1")
    return d


def _sp_general(kernel: KernelSpec, T: float, w: np.ndarray, second: bool,
                spec: QuadratureSpec):
    """Direct shell quadrature for kernels without radial symmetry."""
    p = kernel.origin_singularity_exponent + 1.0

    def g(z):
        fz = kernel.f(z)
        num = kernel.f(z + w) - fz
        if second:
            num = num + kernel.f(z - w) - fz
        return np.abs(num) / np.linalg.norm(z, axis=1)

    return integrate_shell_weighted(g, 0.0, 2.0 * T, p, spec,
                                    axis_exponents=kernel.axis_exponents)


def _sp1_integral(kernel: KernelSpec, T: float, w, spec: Optional[QuadratureSpec]):
    d = _check_shift(kernel, T, w)
    spec = spec or CONDITION_SPEC
    if d == 0.0:
        return certify(lambda sp: 0.0, spec, what="SP1")
    if not kernel.is_radial:
        return _sp_general(kernel, T, as_point(w), False, spec)
    R = 2.0 * T

    def compute(sp: QuadratureSpec) -> float:
        r, wr = _outer_rule(d, R, sp)
        lo, hi = np.abs(r - d), r + d
        q, wq = _segment_rule(lo, r[:, None], hi, sp)
        fr = _radial_eval(kernel, r)
        inner = pairwise_sum(wq * np.abs(_radial_eval(kernel, q) - fr[:, None]) * q, axis=1)
        return 2.0 * math.pi / d * pairwise_sum(wr * inner)

    return certify(compute, spec, what="SP1 integral")


def _sp2_integral(kernel: KernelSpec, T: float, w, spec: Optional[QuadratureSpec]):
    d = _check_shift(kernel, T, w)
    spec = spec or CONDITION_SPEC
    if d == 0.0:
        return certify(lambda sp: 0.0, spec, what="SP2")
    if not kernel.is_radial:
        return _sp_general(kernel, T, as_point(w), True, spec)
    R = 2.0 * T

    def compute(sp: QuadratureSpec) -> float:
        r, wr = _outer_rule(d, R, sp)
        S = r * r + d * d
        lo, hi = np.abs(r - d), np.sqrt(S)
        fr = _radial_eval(kernel, r)

        def F(q, rows=None):
            SS = S[:, None] if rows is None else S[rows][:, None]
            ff = fr[:, None] if rows is None else fr[rows][:, None]
            partner = np.sqrt(np.maximum(2.0 * SS - q * q, 0.0))
            return _radial_eval(kernel, q) + _radial_eval(kernel, partner) - 2.0 * ff

        roots = _sign_changes(F, lo, hi, max_roots=3)
        q, wq = _segment_rule(lo, roots, hi, sp)
        inner = pairwise_sum(wq * np.abs(F(q)) * q, axis=1)
        return 4.0 * math.pi / d * pairwise_sum(wr * inner)

    return certify(compute, spec, what="SP2 integral")


def modulus_L1_first(kernel: KernelSpec, T: float, w,
                     spec: Optional[QuadratureSpec] = None) -> float:
    """Condition SP1 integral ``int_{|z| <= 2T} |f(z + w) - f(z)| / |z| dz``.

    For radial ``f`` with ``d = |w|``, ``r = |z|`` and ``q = |z + w|`` this is
    ``(2 pi / d) int_0^{2T} int_{|r - d|}^{r + d} |f(q) - f(r)| q dq dr``.

    Raises
    ------
    QuadratureError
        When the certificate fails.
    """
    return float(_sp1_integral(kernel, T, w, spec).value)


def modulus_L1_second(kernel: KernelSpec, T: float, w,
                      spec: Optional[QuadratureSpec] = None) -> float:
    """Condition SP2 integral ``int_{|z| <= 2T} |f(z+w) + f(z-w) - 2 f(z)| / |z| dz``.

    For radial ``f`` the integrand is even in ``c = cos(z, w)``; on ``c >= 0``
    the substitution ``q = |z - w|`` gives
    ``(4 pi / d) int_0^{2T} int_{|r-d|}^{sqrt(r^2+d^2)}
    |f(q) + f(sqrt(2 (r^2 + d^2) - q^2)) - 2 f(r)| q dq dr``.
    Sign changes of the inner integrand are located numerically and used as
    breakpoints.
    """
    return float(_sp2_integral(kernel, T, w, spec).value)


# ---------------------------------------------------------------------------
# TC1, TC2


def _tc_integral(kernel: KernelSpec, T: float, h: float, second: bool,
                 spec: Optional[QuadratureSpec]):
    if not T > 0:
        raise ValueError("T must be positive")
    if not 0.0 <= h <= 1.0:
        raise ValueError("h must lie in [0, 1]")
    spec = spec or CONDITION_SPEC
    if h == 0.0:
        return certify(lambda sp: 0.0, spec, what="time condition")
    f = kernel.f

    def g(s, xi, eta):
        base = s[:, None] * (xi + eta)
        val = f(base + h * (xi + eta)) - f(base + h * eta)
        if second:
            val = val - f(base + h * xi) + f(base)
        return np.abs(val)

    if not kernel.is_radial:
        return integrate_sphere_product(g, T, 2 if second else 1, spec, s_breaks=(h,))

    fr = kernel.f_radial

    def theta(y: float) -> float:
        return 2.0 * math.asin(min(y, 2.0) / 2.0)

    def breaks(s: float):
        # B = sqrt(h^2 + s (s + h) y^2) changes regime at y = h / sqrt(s (s + h))
        scale = (theta(h / math.sqrt(s * (s + h))),) if s > 0 and h < math.sqrt(s * (s + h)) else ()
        if not second:
            y = math.sqrt(h / (s + h))
            return scale + ((theta(y),) if y < 2.0 else ())
        # kinks of |f(A) - 2 f(B) + f(C)| as functions of y = |xi + eta|
        def F(y):
            A = (s + h) * y
            B = np.sqrt(h * h + s * (s + h) * y * y)
            return fr(A) - 2.0 * fr(B) + fr(s * y)

        ys = np.linspace(0.0, 2.0, 129)[1:]
        vals = np.asarray(F(ys), dtype=float)
        out = []
        for a, b, fa, fb in zip(ys[:-1], ys[1:], vals[:-1], vals[1:]):
            if np.isfinite(fa) and np.isfinite(fb) and fa * fb < 0:
                root = optimize.brentq(lambda y: float(F(np.array([y]))[0]), a, b, xtol=1e-14)
                out.append(theta(root))
        return scale + tuple(out)

    return integrate_sphere_product(g, T, 2 if second else 1, spec, zonal=True,
                                    angle_breaks=breaks, s_breaks=(h,))


def time_condition_1(kernel: KernelSpec, T: float, h: float,
                     spec: Optional[QuadratureSpec] = None) -> float:
    """Condition TC1 integral.

    For radial ``f`` and ``y = |xi + eta|`` the two arguments have norms
    ``(s + h) y`` and ``sqrt(h^2 + s (s + h) y^2)``, which coincide at
    ``y^2 = h / (s + h)``; that kink is a quadrature breakpoint.
    """
    return float(_tc_integral(kernel, T, h, False, spec).value)


def time_condition_2(kernel: KernelSpec, T: float, h: float,
                     spec: Optional[QuadratureSpec] = None) -> float:
    """Condition TC2 integral (rectangular second difference, weight ``s^2``).

    For radial ``f`` both mixed terms have norm ``sqrt(h^2 + s (s + h) y^2)``,
    so the integrand is ``|f(A) - 2 f(B) + f(C)|`` with ``A = (s + h) y`` and
    ``C = s y``.
    """
    return float(_tc_integral(kernel, T, h, True, spec).value)


# ---------------------------------------------------------------------------
# drivers


def condition_sweep(kernel: KernelSpec, condition_id: str, T: float = 1.0,
                    probe_grid: Optional[Sequence[float]] = None, *,
                    direction=(1.0, 0.0, 0.0), slack: float = DEFAULT_SLACK,
                    spec: Optional[QuadratureSpec] = None) -> ConditionReport:
    """Evaluate a condition on a probe grid, fit the exponent and decide.

    Parameters
    ----------
    kernel : KernelSpec
    condition_id : str
        One of :data:`CONDITION_IDS`.
    T : float
        Time horizon.
    probe_grid : sequence of float, optional
        Dyadic default per condition.
    direction : array_like
        Shift direction for SP1 and SP2 (normalised internally).
    slack : float
        Allowed shortfall of the fitted slope below the predicted supremum.
    spec : QuadratureSpec, optional
    """
    cid = condition_id.upper()
    if cid == "H1":
        return check_H1(kernel, spec=spec)
    if cid == "H2":
        return check_H2(kernel)
    if cid == "NU":
        return small_ball_growth(kernel, T, probe_grid, slack=slack, spec=spec)
    if cid not in CONDITION_IDS:
        raise ValueError(f"unknown condition {condition_id!r}")
    grid = probe_grid if probe_grid is not None else dyadic_grid(_DEFAULT_LEVELS[cid])
    pred = predicted_exponents(kernel)
    if cid in ("SP1", "SP2"):
        u = as_point(direction)
        norm = float(np.linalg.norm(u))
        if norm == 0.0:
            raise ValueError("direction must be nonzero")
        u = u / norm
        fn = _sp1_integral if cid == "SP1" else _sp2_integral
        target = pred.gamma_sup if cid == "SP1" else pred.gamma_prime_sup
        return _sweep(cid, kernel, grid, lambda h: fn(kernel, T, h * u, spec), target, slack,
                      direction=tuple(float(x) for x in u))
    second = cid == "TC2"
    target = pred.rho2_sup if second else pred.rho1_sup
    return _sweep(cid, kernel, grid, lambda h: _tc_integral(kernel, T, h, second, spec),
                  target, slack)


# ---------------------------------------------------------------------------
# predicted Hölder exponents


@dataclass(frozen=True)
class HolderTable:
    """Suprema of the Hölder orders implied by the kernel's exponents.

    Attributes
    ----------
    kernel : str
    route : {"fourier", "shift", "fractional"}
        Which spatial estimate applies: the Fourier-positivity one
        (``kappa1 = min(g1, g2, gamma)``), the shift-difference one
        (``kappa1 = min(g1, g2, gamma, gamma' / 2)``) or the coordinatewise
        fractional one.
    kappa1_shift, kappa1_fourier : float or None
        The two spatial formulas, whenever their inputs exist.
    kappa1 : float or None
        Spatial order supremum on the applicable route.
    kappa2 : float or None
        Time order supremum
        ``min(g1, g2, kappa1, (nu + 1)/2, (rho1 + kappa1)/2, rho2/2)``.
    space_time : float or None
        ``min(kappa1, kappa2)``, the joint order.
    per_direction : tuple of float or None
        Fractional kernels: ``min(H_i - 1/2, kappa_bar)``.
    kappa0 : float or None
        Fractional kernels: minimum over directions.
    """

    kernel: str
    route: str
    gamma1: float
    gamma2: float
    kappa1_shift: Optional[float]
    kappa1_fourier: Optional[float]
    kappa1: Optional[float]
    kappa2: Optional[float]
    space_time: Optional[float]
    per_direction: Optional[tuple[float, float, float]] = None
    kappa0: Optional[float] = None
    note: str = ""

    def as_dict(self) -> dict:
        out = dict(self.__dict__)
        if self.per_direction is not None:
            out["per_direction"] = list(self.per_direction)
        return out


def predicted_holder(kernel: KernelSpec, gamma1: float = 1.0, gamma2: float = 1.0) -> HolderTable:
    """Hölder-order suprema from the kernel's predicted exponents.

    Parameters
    ----------
    kernel : KernelSpec
    gamma1, gamma2 : float in (0, 1]
        Hölder orders of the initial position and velocity data.
    """
    for g in (gamma1, gamma2):
        if not 0.0 < g <= 1.0:
            raise ValueError("initial-data orders must lie in (0, 1]")
    p = predicted_exponents(kernel)
    g12 = min(gamma1, gamma2)
    shift = (min(g12, p.gamma_sup, p.gamma_prime_sup / 2.0)
             if p.gamma_sup is not None and p.gamma_prime_sup is not None else None)
    fourier = min(g12, p.gamma_sup) if p.gamma_sup is not None else None
    per_dir = kappa0 = None
    note = ""
    if kernel.family == "fractional":
        route = "fractional"
        if p.per_direction_space is not None:
            per_dir = tuple(float(x) for x in p.per_direction_space)
            kappa0 = min(per_dir)
            kappa1 = min(g12, kappa0)
        else:
            kappa1 = None
            note = "H1 + H2 + H3 <= 2: the conditions fail and no order is predicted"
    elif kernel.family == "bessel":
        route = "shift"
        kappa1 = shift
        note = "the Fourier-route value is listed for comparison only"
    else:
        route = "fourier"
        kappa1 = fourier
    kappa2 = None
    if kappa1 is not None and None not in (p.nu_sup, p.rho1_sup, p.rho2_sup):
        kappa2 = min(g12, kappa1, (p.nu_sup + 1.0) / 2.0, (p.rho1_sup + kappa1) / 2.0,
                     p.rho2_sup / 2.0)
    space_time = None if kappa1 is None or kappa2 is None else min(kappa1, kappa2)
    return HolderTable(kernel.name, route, float(gamma1), float(gamma2), shift, fourier,
                       kappa1, kappa2, space_time, per_dir, kappa0, note)
