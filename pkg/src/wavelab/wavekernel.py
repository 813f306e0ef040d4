"""Wave-equation geometry in R^3.

The fundamental solution ``G(t)`` of the 3-D wave equation is the uniform
surface measure on the sphere of radius ``t`` divided by ``4 pi t``; it has
total mass ``t`` and Fourier transform ``sin(t |xi|) / |xi|``.  For ``s >= t``
the convolution ``G(s) * G(t)`` has density ``1 / (8 pi |x|)`` on the shell
``s - t <= |x| <= s + t`` (total mass ``s t``); its normalised version is the
law of ``|X + Y|`` for independent uniform points ``X``, ``Y`` on the two
spheres, with density ``1 / (8 pi s t |z|)``.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .kernels import KernelSpec
from .quadrature import Integral, QuadratureSpec, integrate_shell_weighted

__all__ = [
    "SERIES_THRESHOLD",
    "as_point",
    "fourier_G",
    "sample_sphere",
    "sphere_conv_density",
    "sphere_conv_measure_density",
    "sphere_conv_cdf",
    "gg_functional_physical",
    "gg_physical_riesz",
]

#: Below ``t * xi_norm < SERIES_THRESHOLD`` the transform uses its Taylor series.
SERIES_THRESHOLD = 1e-4


def as_point(x) -> np.ndarray:
    """Validate and return a finite 3-vector."""
    p = np.asarray(x, dtype=float)
    if p.shape != (3,):
        raise ValueError(f"expected a point in R^3, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    return p


def fourier_G(t, xi_norm):
    """Fourier transform ``sin(t r) / r`` of the wave kernel ``G(t)``.

    Parameters
    ----------
    t : float or ndarray
        Time, ``t >= 0``.
    xi_norm : float or ndarray
        Frequency modulus ``r >= 0``.

    Returns
    -------
    float or ndarray
        ``sin(t r) / r``; for ``t r`` below :data:`SERIES_THRESHOLD` the
        series ``t (1 - (t r)^2 / 6)`` is used, which also gives ``t`` at
        ``r = 0``.
    """
    t_arr = np.asarray(t, dtype=float)
    r = np.asarray(xi_norm, dtype=float)
    if np.any(t_arr < 0) or np.any(r < 0):
        raise ValueError("fourier_G needs t >= 0 and xi_norm >= 0")
    x = t_arr * r
    small = x < SERIES_THRESHOLD
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.sin(x) / r
    out = np.where(small, t_arr * (1.0 - x * x / 6.0), direct)
    return float(out) if out.ndim == 0 else out


def sample_sphere(radius: float, rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    """Uniform point(s) on the sphere of the given radius.

    Normalised standard Gaussian vectors are exactly uniform on the sphere.

    Parameters
    ----------
    radius : float
        Positive radius.
    rng : numpy.random.Generator
        Caller-owned stream.
    size : int, optional
        Number of points; a single point of shape ``(3,)`` when omitted.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    n = 1 if size is None else int(size)
    g = rng.standard_normal((n, 3))
    norms = np.linalg.norm(g, axis=1)
    while np.any(norms == 0.0):  # probability zero, kept for totality
        bad = norms == 0.0
        g[bad] = rng.standard_normal((int(bad.sum()), 3))
        norms = np.linalg.norm(g, axis=1)
    pts = radius * g / norms[:, None]
    return pts[0] if size is None else pts


def _check_order(s: float, t: float) -> None:
    if not t > 0:
        raise ValueError("t must be positive")
    if s < t:
        raise ValueError("sphere_conv_density needs s >= t; order the arguments")


def sphere_conv_density(s: float, t: float, r):
    """Density in R^3 of ``X + Y`` at radius ``r`` (total mass 1).

    ``X`` and ``Y`` are uniform on the spheres of radii ``s >= t``; the
    density is ``1 / (8 pi s t r)`` on ``[s - t, s + t]`` and 0 elsewhere.
    """
    _check_order(s, t)
    r = np.asarray(r, dtype=float)
    inside = (r >= s - t) & (r <= s + t) & (r > 0)
    with np.errstate(divide="ignore"):
        out = np.where(inside, 1.0 / (8.0 * math.pi * s * t * r), 0.0)
    return float(out) if out.ndim == 0 else out


def sphere_conv_measure_density(s: float, t: float, r):
    """Density of the measure ``G(s) * G(t)`` (total mass ``s t``).

    Equals ``s * t * sphere_conv_density(s, t, r)``, i.e. ``1 / (8 pi r)`` on
    the shell.
    """
    return s * t * sphere_conv_density(s, t, r)


def sphere_conv_cdf(s: float, t: float, r):
    """Distribution function ``(r^2 - (s - t)^2) / (4 s t)`` of ``|X + Y|``."""
    _check_order(s, t)
    r = np.clip(np.asarray(r, dtype=float), s - t, s + t)
    out = (r * r - (s - t) ** 2) / (4.0 * s * t)
    return float(out) if out.ndim == 0 else out


def gg_physical_riesz(beta: float, s: float, t: float) -> float:
    """Closed form of the physical double integral for ``f = |x|**(-beta)``.

    ``(1/2) int_{|s-t|}^{s+t} r**(1-beta) dr``.
    """
    s, t = max(s, t), min(s, t)
    g = 2.0 - beta
    return 0.5 * ((s + t) ** g - (s - t) ** g) / g


def gg_functional_physical(kernel: KernelSpec, s: float, t: float,
                           spec: Optional[QuadratureSpec] = None) -> Integral:
    """``int int f(x - y) G(s, dx) G(t, dy)`` on the physical side.

    The double integral equals ``int f(x) / (8 pi |x|) dx`` over the shell
    ``|s - t| <= |x| <= s + t``, evaluated by certified shell quadrature.

    Parameters
    ----------
    kernel : KernelSpec
    s, t : float
        Positive times (any order).
    spec : QuadratureSpec, optional

    Returns
    -------
    Integral
        Value with its self-convergence certificate.
    """
    if not (s > 0 and t > 0):
        raise ValueError("s and t must be positive")
    s, t = max(s, t), min(s, t)
    spec = spec or QuadratureSpec()
    p = kernel.origin_singularity_exponent

    def g(x):
        r = np.linalg.norm(x, axis=1)
        return kernel.f(x) / (8.0 * math.pi * r)

    if kernel.is_radial:
        return integrate_shell_weighted(g, s - t, s + t, p + 1.0, spec, isotropic=True)
    return integrate_shell_weighted(g, s - t, s + t, p + 1.0, spec,
                                    axis_exponents=kernel.axis_exponents)
