"""Second moments of the linear additive-noise solution.

For ``u(t, x) = int_0^t int G(t - s, x - y) W(ds, dy)`` the isometry gives

    E u(t, x) u(t', x') = int_0^{min(t,t')} int FG(t-s)(xi) FG(t'-s)(xi)
                          cos(xi . (x - x')) mu(dxi) ds.

Every time integral below is done in closed form, leaving one spectral
integral.  Writing ``r = |xi|``:

* variance: ``int_0^t sin^2((t-s) r) / r^2 ds = (2 t r - sin(2 t r)) / (4 r^3)``;
* spatial variogram ``E|u(t,x) - u(t,0)|^2``: twice the variance integrand
  times ``1 - cos(xi . x)``;
* ``Z1(t, tbar)``: the variance integrand with ``t`` replaced by ``tbar - t``;
* ``Z2(t, tbar)`` with ``h = tbar - t``:
  ``int_0^t (sin((tbar-s) r) - sin((t-s) r))^2 / r^2 ds
  = 2 sin^2(h r / 2) (t + cos((t + h) r) sin(t r) / r) / r^2``,
  obtained from ``sin A - sin B = 2 cos((A+B)/2) sin((A-B)/2)``; both
  factors are nonnegative, so the expression is cancellation-free;
* the double integral ``int int f(x - y + w) G(s, dx) G(t, dy)`` on the
  spectral side: ``FG(s) FG(t) cos(xi . w)``.

All integrals run through :func:`wavelab.quadrature.integrate_zonal_spectral`,
which integrates exactly over the angle to the zonal vector and adds the
spectral tail in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .kernels import KernelSpec
from .quadrature import (
    Certificate,
    Integral,
    QuadratureSpec,
    TrigTerm,
    ZonalIntegrand,
    integrate_zonal_spectral,
    scale_terms,
    times_cos,
)
from .wavekernel import as_point, fourier_G

__all__ = [
    "MomentResult",
    "x_minus_sin",
    "variance_integrand",
    "z2_integrand",
    "variance",
    "spatial_variogram_exact",
    "temporal_Z1",
    "temporal_Z2",
    "temporal_increment_variance",
    "gg_functional_spectral",
    "shifted_gg_functional",
]

_HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class MomentResult:
    """Value of a second-moment functional with its certificate.

    Attributes
    ----------
    value : float
    certificate : Certificate
    method : {"spectral", "physical"}
    """

    value: float
    certificate: Certificate
    method: str = "spectral"

    def __float__(self) -> float:
        return float(self.value)

    @classmethod
    def from_integral(cls, integral: Integral, method: str = "spectral") -> "MomentResult":
        return cls(integral.value, integral.certificate, method)

    @classmethod
    def zero(cls, tolerance: float) -> "MomentResult":
        return cls(0.0, Certificate(0.0, 0.0, 0.0, tolerance), "spectral")


def x_minus_sin(x) -> np.ndarray:
    """``x - sin(x)`` without cancellation for small ``x``."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    series = x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0))))
    return np.where(np.abs(x) < 0.1, series, x - np.sin(x))


def variance_integrand(t: float, r) -> np.ndarray:
    """``int_0^t sin^2((t-s) r) / r^2 ds = (2 t r - sin(2 t r)) / (4 r^3)``."""
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = x_minus_sin(2.0 * t * r) / (4.0 * r ** 3)
    return np.where(r == 0.0, t ** 3 / 3.0, out)


def z2_integrand(t: float, h: float, r) -> np.ndarray:
    """``2 sin^2(h r/2) (t + cos((t+h) r) sin(t r)/r) / r^2`` (Z2 time integral)."""
    r = np.asarray(r, dtype=float)
    fg = fourier_G(t, r)
    half = fourier_G(h / 2.0, r)  # sin(h r / 2) / r
    return 2.0 * half * half * (t + np.cos((t + h) * r) * fg)


def _variance_terms(t: float) -> tuple[TrigTerm, ...]:
    # t/(2 r^2) - sin(2 t r)/(4 r^3)
    return (TrigTerm(0.5 * t, -2.0), TrigTerm(-0.25, -3.0, 2.0 * t, 0.0, -_HALF_PI))


def _canonical(v: np.ndarray) -> np.ndarray:
    """Representative of ``{v, -v}`` (first nonzero coordinate positive)."""
    nz = np.nonzero(v)[0]
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def _run(integrand: ZonalIntegrand, kernel: KernelSpec, spec: Optional[QuadratureSpec]) -> MomentResult:
    spec = spec or QuadratureSpec()
    return MomentResult.from_integral(integrate_zonal_spectral(integrand, kernel.density, spec))


def variance(kernel: KernelSpec, t: float, spec: Optional[QuadratureSpec] = None) -> MomentResult:
    """``E u(t, x)^2 = int (t - sin(2 t r)/(2 r)) / (2 r^2) mu(dxi)``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return MomentResult.zero((spec or QuadratureSpec()).tolerance)
    integrand = ZonalIntegrand(lambda r, a: variance_integrand(t, r) + 0.0 * a,
                               _variance_terms(t))
    return _run(integrand, kernel, spec)


def spatial_variogram_exact(kernel: KernelSpec, t: float, x,
                            spec: Optional[QuadratureSpec] = None) -> MomentResult:
    """``E|u(t, x) - u(t, 0)|^2``.

    Equals ``int (1 - cos(xi . x)) (t - sin(2 t r)/(2 r)) / r^2 mu(dxi)``.
    Evenness in ``x`` is used to evaluate ``x`` and ``-x`` identically.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    x = _canonical(as_point(x))
    if t == 0 or not np.any(x):
        return MomentResult.zero((spec or QuadratureSpec()).tolerance)
    base = scale_terms(_variance_terms(t), 2.0)
    terms = base + scale_terms(times_cos(base, 0.0, 1.0), -1.0)

    def evaluate(r, a):
        s = np.sin(0.5 * a * r)
        return 4.0 * s * s

    integrand = ZonalIntegrand(evaluate, terms, vector=x,
                               factor=lambda r: variance_integrand(t, r))
    return _run(integrand, kernel, spec)


def _check_times(t: float, tbar: float) -> float:
    if t < 0:
        raise ValueError("t must be nonnegative")
    if tbar < t:
        raise ValueError("need tbar >= t")
    return tbar - t


def temporal_Z1(kernel: KernelSpec, t: float, tbar: float,
                spec: Optional[QuadratureSpec] = None) -> MomentResult:
    """``Z1 = int (h - sin(2 h r)/(2 r)) / (2 r^2) mu(dxi)`` with ``h = tbar - t``."""
    h = _check_times(t, tbar)
    return variance(kernel, h, spec)


def temporal_Z2(kernel: KernelSpec, t: float, tbar: float,
                spec: Optional[QuadratureSpec] = None) -> MomentResult:
    """``Z2 = int_0^t int (sin((tbar-s) r) - sin((t-s) r))^2 / r^2 mu(dxi) ds``."""
    h = _check_times(t, tbar)
    if t == 0 or h == 0:
        return MomentResult.zero((spec or QuadratureSpec()).tolerance)
    base = (TrigTerm(t, -2.0),
            TrigTerm(0.5, -3.0, 2.0 * t + h, 0.0, -_HALF_PI),
            TrigTerm(-0.5, -3.0, h, 0.0, -_HALF_PI))
    terms = base + scale_terms(times_cos(base, h, 0.0), -1.0)
    integrand = ZonalIntegrand(lambda r, a: z2_integrand(t, h, r) + 0.0 * a, terms)
    return _run(integrand, kernel, spec)


def temporal_increment_variance(kernel: KernelSpec, t: float, tbar: float,
                                spec: Optional[QuadratureSpec] = None) -> MomentResult:
    """``E|u(tbar, x) - u(t, x)|^2 = Z1 + Z2``.

    The increment splits into a stochastic integral over ``[t, tbar]`` and
    one over ``[0, t]``; they are orthogonal, so their variances add.  The
    familiar ``2 Z1 + 2 Z2`` is only the upper bound from
    ``(a + b)^2 <= 2 a^2 + 2 b^2``.
    """
    z1 = temporal_Z1(kernel, t, tbar, spec)
    z2 = temporal_Z2(kernel, t, tbar, spec)
    value = z1.value + z2.value
    c1, c2 = z1.certificate, z2.certificate
    cert = Certificate(
        base_value=c1.base_value + c2.base_value,
        refined_value=value,
        delta=max(c1.delta, c2.delta),
        tolerance=c1.tolerance,
        tail_bound=c1.tail_bound + c2.tail_bound,
    )
    return MomentResult(value, cert, "spectral")


def _gg_terms(s: float, t: float) -> tuple[TrigTerm, ...]:
    # sin(s r) sin(t r) / r^2 = (cos((s-t) r) - cos((s+t) r)) / (2 r^2)
    return (TrigTerm(0.5, -2.0, s - t), TrigTerm(-0.5, -2.0, s + t))


def gg_functional_spectral(kernel: KernelSpec, s: float, t: float,
                           spec: Optional[QuadratureSpec] = None) -> MomentResult:
    """``int FG(s)(xi) FG(t)(xi) mu(dxi)``, the spectral side of the double integral."""
    if not (s > 0 and t > 0):
        raise ValueError("s and t must be positive")
    s, t = max(s, t), min(s, t)
    integrand = ZonalIntegrand(lambda r, a: fourier_G(s, r) * fourier_G(t, r) + 0.0 * a,
                               _gg_terms(s, t))
    return _run(integrand, kernel, spec)


def shifted_gg_functional(kernel: KernelSpec, s: float, t: float, w,
                          spec: Optional[QuadratureSpec] = None) -> MomentResult:
    """``int FG(s) FG(t) cos(xi . w) mu(dxi) = int int f(x - y + w) G(s,dx) G(t,dy)``.

    The imaginary part vanishes because ``mu`` is symmetric.  For ``w = 0``
    this is :func:`gg_functional_spectral`.
    """
    if not (s > 0 and t > 0):
        raise ValueError("s and t must be positive")
    w = _canonical(as_point(w))
    if not np.any(w):
        return gg_functional_spectral(kernel, s, t, spec)
    s, t = max(s, t), min(s, t)
    terms = times_cos(_gg_terms(s, t), 0.0, 1.0)

    integrand = ZonalIntegrand(lambda r, a: np.cos(a * r), terms, vector=w,
                               factor=lambda r: fourier_G(s, r) * fourier_G(t, r))
    return _run(integrand, kernel, spec)
