"""Covariance kernel families and their spectral densities.

Four families are available:

========================  ==========================================  ============
family                    kernel ``f(x)``                             parameters
========================  ==========================================  ============
``riesz``                 ``|x|**(-beta)``                            ``0 < beta < 2``
``bessel``                ``int_0^inf w**((alpha-5)/2) e^{-w}``       ``alpha > 1``
                          ``e^{-|x|^2/(4w)} dw``
``fractional``            ``c_H prod |x_i|**(2 H_i - 2)``             ``1/2 < H_i < 1``
``smoothed_riesz``        ``(rho * |.|**(-beta))(x)``,                ``0 < beta < 3``
                          ``rho(x) = exp(-|x|^2)``
========================  ==========================================  ============

Spectral densities follow the convention ``F phi(xi) = int phi(x) e^{-i xi.x} dx``
with ``int f phi dx = int F phi dmu``, so ``mu = (2 pi)**(-3) F f``.  The
resulting constants are

* ``c3(beta) = pi**1.5 2**(3-beta) Gamma((3-beta)/2) / Gamma(beta/2)``, the
  Fourier transform of ``|x|**(-beta)`` being ``c3 |xi|**(beta-3)``;
* ``c1(H) = Gamma(2H+1) sin(pi H)``, the one-dimensional transform of
  ``H (2H-1) |x|**(2H-2)`` being ``c1 |xi|**(1-2H)``;
* ``c_B(alpha) = Gamma(alpha/2) / pi**1.5`` for the Bessel density
  ``c_B (1 + |xi|^2)**(-alpha/2)``.

They are validated in the test-suite by comparing physical-side and
spectral-side evaluations of the same double integral.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special

from .quadrature import (
    Integral,
    QuadratureError,
    QuadratureSpec,
    axis_angular_mass,
    composite_rule,
    gauss_legendre,
    graded_rule,
    integrate_spectral,
    pairwise_sum,
)

__all__ = [
    "FAMILIES",
    "KernelSpec",
    "SpectralDensity",
    "PredictedExponents",
    "riesz_constant",
    "fractional_constant",
    "bessel_constant",
    "eval_f",
    "eval_spectral_density",
    "predicted_exponents",
    "make_kernel",
]

FAMILIES = ("riesz", "bessel", "fractional", "smoothed_riesz")

_ALIASES = {
    "riesz": "riesz",
    "bessel": "bessel",
    "fractional": "fractional",
    "fractionalproduct": "fractional",
    "fractional_product": "fractional",
    "smoothedriesz": "smoothed_riesz",
    "smoothed_riesz": "smoothed_riesz",
    "smoothed-riesz": "smoothed_riesz",
}

_PARAM_NAMES = {
    "riesz": ("beta",),
    "bessel": ("alpha",),
    "fractional": ("h1", "h2", "h3"),
    "smoothed_riesz": ("beta",),
}


def riesz_constant(beta: float) -> float:
    """``c3(beta)``: Fourier transform constant of ``|x|**(-beta)`` in R^3."""
    return (math.pi ** 1.5 * 2.0 ** (3.0 - beta) * math.gamma((3.0 - beta) / 2.0)
            / math.gamma(beta / 2.0))


def fractional_constant(h: float) -> float:
    """``c1(H)``: Fourier transform constant of ``H(2H-1)|x|**(2H-2)`` in R."""
    return math.gamma(2.0 * h + 1.0) * math.sin(math.pi * h)


def bessel_constant(alpha: float) -> float:
    """``c_B(alpha)``: prefactor of the Bessel spectral density."""
    return math.gamma(alpha / 2.0) / math.pi ** 1.5


# ---------------------------------------------------------------------------
# spectral densities


@dataclass(frozen=True)
class SpectralDensity:
    """Density of the spectral measure, factored as ``radial(r) * W(xi_hat)``.

    Attributes
    ----------
    family : str
    radial_fn : callable
        ``r -> radial(r)``.
    radial_exponent : float
        ``radial(r) ~ r**radial_exponent`` as ``r -> 0``.
    tail_decay_exponent : float
        ``radial(r) <= C r**tail_decay_exponent`` at infinity (``-inf`` for
        faster than any power).
    angular_exponents : tuple of float or None
        ``W = prod |w_i|**b_i``; ``None`` for isotropic densities.
    tail : tuple of (coef, power)
        Exact or convergent expansion ``sum coef r**power`` of ``radial`` for
        ``r`` beyond the spectral cutoff; empty when ``effective_cutoff`` is
        set.
    effective_cutoff : float or None
        Radius beyond which the density is negligible (Gaussian decay).
    """

    family: str
    radial_fn: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    radial_exponent: float
    tail_decay_exponent: float
    angular_exponents: Optional[tuple[float, float, float]] = None
    tail: tuple[tuple[float, float], ...] = ()
    effective_cutoff: Optional[float] = None
    h2_certificate: Optional[Integral] = field(default=None, compare=False, repr=False)

    @property
    def axis_singular(self) -> bool:
        return self.angular_exponents is not None

    @property
    def radial_singularity_exponent(self) -> float:
        """Exponent of the full density at the origin (alias)."""
        return self.radial_exponent

    @property
    def angular_mass(self) -> float:
        """``int_{S^2} W dsigma``."""
        if self.angular_exponents is None:
            return 4.0 * math.pi
        return axis_angular_mass(self.angular_exponents)

    def radial(self, r) -> np.ndarray:
        return self.radial_fn(np.asarray(r, dtype=float))

    def tail_terms(self) -> tuple[tuple[float, float], ...]:
        return self.tail

    def angular(self, omega) -> np.ndarray:
        omega = np.atleast_2d(np.asarray(omega, dtype=float))
        if self.angular_exponents is None:
            return np.ones(omega.shape[0])
        return np.prod(np.abs(omega) ** np.asarray(self.angular_exponents), axis=1)

    def on_singular_set(self, xi) -> np.ndarray:
        xi = np.atleast_2d(np.asarray(xi, dtype=float))
        if self.angular_exponents is not None:
            return np.any(xi == 0.0, axis=1)
        if self.radial_exponent < 0:
            return np.all(xi == 0.0, axis=1)
        return np.zeros(xi.shape[0], dtype=bool)

    def __call__(self, xi) -> np.ndarray:
        """Density at ``xi`` (shape ``(3,)`` or ``(N, 3)``)."""
        arr = np.asarray(xi, dtype=float)
        pts = np.atleast_2d(arr)
        if np.any(self.on_singular_set(pts)):
            raise ValueError("spectral density evaluated on its singular set")
        r = np.linalg.norm(pts, axis=1)
        out = self.radial(r) * self.angular(pts / r[:, None])
        return out[0] if arr.ndim == 1 else out


# ---------------------------------------------------------------------------
# radial evaluators for the quadrature-defined kernels


class _BesselEvaluator:
    """Vectorised half-line quadrature of the Bessel kernel.

    With ``w = e^u`` the integrand is ``exp(phi(u))``,
    ``phi(u) = nu u - e^u - a e^{-u}``, ``nu = (alpha-3)/2`` and ``a = r^2/4``.
    ``phi`` is concave, so the region where it lies within 40 of its peak is
    an interval found by bisection on each side; uniform Gauss-Legendre panels
    of width at most ``h`` cover it.
    """

    _DROP = 40.0
    _TINY = 1e-100

    def __init__(self, alpha: float, h: float = 0.5, n: int = 10):
        self.nu = (alpha - 3.0) / 2.0
        self.h = h
        self.n = n

    def _phi(self, u, a):
        with np.errstate(over="ignore", invalid="ignore"):
            return self.nu * u - np.exp(u) - a * np.exp(-u)

    def _bisect(self, lo, hi, a, target, increasing):
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            above = self._phi(mid, a) >= target
            if increasing:
                hi = np.where(above, mid, hi)
                lo = np.where(above, lo, mid)
            else:
                lo = np.where(above, mid, lo)
                hi = np.where(above, hi, mid)
        return 0.5 * (lo + hi)

    def __call__(self, r: np.ndarray, h: Optional[float] = None, n: Optional[int] = None) -> np.ndarray:
        h = self.h if h is None else h
        n = self.n if n is None else n
        r = np.asarray(r, dtype=float)
        out = np.empty(r.shape)
        zero = r == 0.0
        out[zero] = math.gamma(self.nu) if self.nu > 0 else math.inf
        tiny = (r < self._TINY) & ~zero
        out[tiny] = self._small_r(r[tiny])
        rest = ~(zero | tiny)
        rr = r[rest]
        if rr.size:
            a = rr * rr / 4.0
            root = np.sqrt(self.nu ** 2 + 4.0 * a)
            if self.nu >= 0:
                ustar = np.log((self.nu + root) / 2.0)
            else:
                ustar = np.log(2.0 * a / (root - self.nu))
            peak = self._phi(ustar, a)
            target = peak - self._DROP
            left = self._bisect(ustar - 2000.0, ustar, a, target, increasing=True)
            # for nu near 0 the right tail decays like e^(nu u) until e^u takes over
            right = self._bisect(ustar, np.maximum(ustar, 0.0) + 60.0, a, target, increasing=False)
            out[rest] = self._integrate(left, right, a, peak, h, n)
        return out

    @staticmethod
    def _panel_ladder(width: np.ndarray, h: float) -> np.ndarray:
        """Per-point panel counts on a fixed ladder (independent of the batch)."""
        need = np.maximum(np.ceil(width / h), 1.0)
        ladder = np.ceil(8.0 * 1.5 ** np.ceil(np.log(np.maximum(need / 8.0, 1.0)) / np.log(1.5)))
        return ladder.astype(int)

    def _integrate(self, left, right, a, peak, h, n):
        x, w = gauss_legendre(n)
        npan = self._panel_ladder(right - left, h)
        out = np.empty(left.size)
        for m in np.unique(npan):
            idx = np.nonzero(npan == m)[0]
            step = max(1, 2_000_000 // (m * n))
            for start in range(0, idx.size, step):
                sel = idx[start:start + step]
                lo, wid = left[sel], right[sel] - left[sel]
                edges = lo[:, None] + wid[:, None] * (np.arange(m + 1) / m)[None, :]
                half = 0.5 * (edges[:, 1:] - edges[:, :-1])
                u = 0.5 * (edges[:, 1:] + edges[:, :-1])[..., None] + half[..., None] * x
                # factor the peak out to keep exponents in range
                vals = np.exp(self._phi(u, a[sel, None, None]) - peak[sel, None, None])
                tot = pairwise_sum(pairwise_sum(half[..., None] * w * vals))
                out[sel] = tot * np.exp(peak[sel])
        return out

    def _small_r(self, r: np.ndarray) -> np.ndarray:
        return _bessel_small_r(self.nu, r)


def _bessel_small_r(nu: float, r: np.ndarray) -> np.ndarray:
    """``2 (r/2)^nu K_nu(r)`` to relative accuracy O(r^2 |log r|).

    For ``|nu| < 1`` the two leading terms ``Gamma(nu) + Gamma(-nu) (r/2)^(2 nu)``
    are combined as ``Gamma(1-nu)/nu * (expm1(lg(1+nu) - lg(1-nu))
    - expm1(2 nu log(r/2)))``, which stays accurate as ``nu -> 0``.
    """
    r = np.asarray(r, dtype=float)
    if nu >= 1.0:
        return np.full(r.shape, math.gamma(nu))
    L = np.log(r / 2.0)
    if nu == 0.0:
        return -2.0 * (L + np.euler_gamma)
    d = math.expm1(_lgamma_odd_difference(nu))
    with np.errstate(over="ignore"):
        return math.gamma(1.0 - nu) / nu * (d - np.expm1(2.0 * nu * L))


def _lgamma_odd_difference(x: float) -> float:
    """``lgamma(1 + x) - lgamma(1 - x)``, accurate also for tiny ``x``."""
    if abs(x) >= 0.1:
        return math.lgamma(1.0 + x) - math.lgamma(1.0 - x)
    k = np.arange(3, 40, 2)
    return float(-2.0 * np.euler_gamma * x - 2.0 * np.sum(special.zeta(k) * x ** k / k))


class _BesselClosedForm:
    """``2 (r/2)^nu K_nu(r)`` through scipy's exponentially scaled ``kve``."""

    _SMALL = 1e-9

    def __init__(self, alpha: float):
        self.nu = (alpha - 3.0) / 2.0

    def __call__(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        out = np.empty(r.shape)
        zero = r == 0.0
        out[zero] = math.gamma(self.nu) if self.nu > 0 else math.inf
        small = (r < self._SMALL) & ~zero
        out[small] = _bessel_small_r(self.nu, r[small])
        rest = ~(zero | small)
        rr = r[rest]
        with np.errstate(over="ignore", divide="ignore"):
            out[rest] = 2.0 * np.exp(self.nu * np.log(rr / 2.0) - rr
                                     + np.log(special.kve(self.nu, rr)))
        return out


class _SmoothedRieszEvaluator:
    """Radial profile of ``exp(-|.|^2) * |.|**(-beta)``.

    Averaging ``|x - y|**(-beta)`` over spheres reduces the convolution to

        f(r) = (2 pi / r) int_0^inf e^{-p^2} p D(r, p) dp,
        D = ((r + p)**g - |r - p|**g) / g,   g = 2 - beta,

    (``D = log((r+p)/|r-p|)`` when ``g = 0``).  ``D`` is formed stably from
    ``log1p``/``expm1``; the kink at ``p = r`` is a panel boundary with graded
    panels on both sides.  Below ``r = 1e-4`` the even profile is
    interpolated quadratically from ``f(0) = 2 pi Gamma((3 - beta)/2)``.
    """

    _PMAX = 7.5
    _RSMALL = 1e-4

    def __init__(self, beta: float, n: int = 16, layers: int = 16):
        self.beta = beta
        self.g = 2.0 - beta
        self.n = n
        self.layers = layers
        self.f0 = 2.0 * math.pi * math.gamma((3.0 - beta) / 2.0)

    def _d_over_g(self, r, p, delta):
        # delta = |r - p| supplied exactly, so 1 - u keeps full precision
        m = np.maximum(r, p)
        u = np.minimum(r, p) / m
        one_minus_u = delta / m
        lr = np.log1p(u) - np.log(one_minus_u)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if self.g == 0.0:
                core = lr
            else:
                core = np.expm1(self.g * lr) / self.g
            return m ** self.g * one_minus_u ** self.g * core

    def _raw(self, r: np.ndarray, n: int, layers: int) -> np.ndarray:
        tau, wt = graded_rule(0.0, 1.0, layers, "left", n)
        out = np.empty(r.shape)
        inner = r < self._PMAX
        if np.any(inner):
            ri = r[inner][:, None]
            # [0, r] graded toward r, then [r, PMAX] graded toward r
            da = ri * tau[None, :]
            db = (self._PMAX - ri) * tau[None, :]
            p = np.concatenate([ri - da, ri + db], axis=1)
            delta = np.concatenate([da, db], axis=1)
            w = np.concatenate([ri * wt[None, :], (self._PMAX - ri) * wt[None, :]], axis=1)
            vals = np.exp(-p * p) * p * self._d_over_g(ri, p, delta)
            vals = np.where(np.isfinite(vals), vals, 0.0)
            out[inner] = 2 * math.pi / r[inner] * pairwise_sum(w * vals, axis=1)
        outer = ~inner
        if np.any(outer):
            ro = r[outer][:, None]
            p, w = composite_rule(np.linspace(0.0, self._PMAX, 9), n)
            pp = p[None, :]
            vals = np.exp(-pp * pp) * pp * self._d_over_g(ro, pp, ro - pp)
            out[outer] = 2 * math.pi / r[outer] * pairwise_sum(w[None, :] * vals, axis=1)
        return out

    def __call__(self, r: np.ndarray, n: Optional[int] = None, layers: Optional[int] = None) -> np.ndarray:
        n = self.n if n is None else n
        layers = self.layers if layers is None else layers
        r = np.asarray(r, dtype=float)
        out = np.empty(r.shape)
        small = r < self._RSMALL
        if np.any(small):
            edge = self._raw(np.array([self._RSMALL]), n, layers)[0]
            out[small] = self.f0 + (edge - self.f0) * (r[small] / self._RSMALL) ** 2
        big = ~small
        if np.any(big):
            out[big] = self._raw(r[big], n, layers)
        return out


def _certify_profile(fn: Callable[..., np.ndarray], fine_kwargs: dict, name: str, tol: float = 1e-10):
    """Compare a radial evaluator with its refined version on a probe grid."""
    probe = np.concatenate([np.logspace(-8, 2.5, 43), [0.5, 1.0, 2.0, 7.5, 10.0]])
    base = fn(probe)
    fine = fn(probe, **fine_kwargs)
    keep = np.isfinite(fine) & (fine > 1e-280)
    rel = np.abs(base[keep] - fine[keep]) / np.abs(fine[keep])
    if rel.size and np.max(rel) > tol:
        i = int(np.argmax(rel))
        raise QuadratureError(
            f"{name} kernel quadrature did not converge at r={probe[keep][i]:g}",
            (base[keep][i], fine[keep][i]))


def _cross_check_profile(fast: Callable, reference: Callable, name: str, tol: float = 1e-10):
    """Require two independent radial evaluators to agree on the probe grid."""
    probe = np.concatenate([np.logspace(-12, 2.5, 59), [0.5, 1.0, 2.0, 7.5, 10.0]])
    a, b = fast(probe), reference(probe)
    keep = np.isfinite(b) & (np.abs(b) > 1e-280)
    rel = np.abs(a[keep] - b[keep]) / np.abs(b[keep])
    if not np.all(np.isfinite(a[keep])) or (rel.size and np.max(rel) > tol):
        raise QuadratureError(f"{name} kernel evaluators disagree", (float(np.max(rel)),))


# ---------------------------------------------------------------------------
# predicted exponents


@dataclass(frozen=True)
class PredictedExponents:
    """Suprema of admissible exponents for one kernel.

    Fields are ``None`` when no bound is asserted for the family.
    """

    kappa_bar: Optional[float] = None
    nu_sup: Optional[float] = None
    gamma_sup: Optional[float] = None
    gamma_prime_sup: Optional[float] = None
    rho1_sup: Optional[float] = None
    rho2_sup: Optional[float] = None
    per_direction_space: Optional[tuple[float, float, float]] = None

    def as_dict(self) -> dict:
        return {
            "kappa_bar": self.kappa_bar,
            "nu_sup": self.nu_sup,
            "gamma_sup": self.gamma_sup,
            "gamma_prime_sup": self.gamma_prime_sup,
            "rho1_sup": self.rho1_sup,
            "rho2_sup": self.rho2_sup,
            "per_direction_space": (None if self.per_direction_space is None
                                    else list(self.per_direction_space)),
        }


# ---------------------------------------------------------------------------
# kernel spec


@dataclass(frozen=True)
class KernelSpec:
    """A validated covariance kernel.

    Build instances with :func:`make_kernel` or the family constructors
    (:meth:`riesz`, :meth:`bessel`, :meth:`fractional`,
    :meth:`smoothed_riesz`).  Construction validates the parameters, builds
    the spectral density, certifies the radial evaluators of the
    quadrature-defined families and certifies
    ``int density / (1 + |xi|^2) dxi < inf``.

    Attributes
    ----------
    family : str
    params : tuple of float
        ``(beta,)``, ``(alpha,)`` or ``(H1, H2, H3)``.
    include_constants : bool
        Carry the normalisation constants in ``f`` and in the density.
    """

    family: str
    params: tuple[float, ...]
    include_constants: bool = True
    density: SpectralDensity = field(init=False, repr=False, compare=False)
    _profile: Optional[Callable] = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        fam = _ALIASES.get(str(self.family).lower())
        if fam is None:
            raise ValueError(f"unknown kernel family {self.family!r}; choose from {FAMILIES}")
        object.__setattr__(self, "family", fam)
        params = tuple(float(p) for p in np.atleast_1d(self.params))
        object.__setattr__(self, "params", params)
        if len(params) != len(_PARAM_NAMES[fam]):
            raise ValueError(f"{fam} takes parameters {_PARAM_NAMES[fam]}")
        if not all(math.isfinite(p) for p in params):
            raise ValueError("kernel parameters must be finite")
        self._validate()
        if fam == "bessel":
            ev = _BesselEvaluator(params[0])
            _certify_profile(ev, {"h": 0.25, "n": 20}, "Bessel")
            closed = _BesselClosedForm(params[0])
            _cross_check_profile(closed, ev, "Bessel")
            object.__setattr__(self, "_profile", closed)
        elif fam == "smoothed_riesz":
            ev = _SmoothedRieszEvaluator(params[0])
            _certify_profile(ev, {"n": 32, "layers": 32}, "smoothed Riesz")
            object.__setattr__(self, "_profile", ev)
        if self.warning:
            warnings.warn(f"H1+H2+H3 = {sum(params):g} <= 2: the kernel violates the "
                          "integrability conditions and no scaling exponent exists",
                          RuntimeWarning, stacklevel=3)
        object.__setattr__(self, "density", self._build_density())

    # -- construction helpers ------------------------------------------------

    @classmethod
    def riesz(cls, beta: float, include_constants: bool = True) -> "KernelSpec":
        return cls("riesz", (beta,), include_constants)

    @classmethod
    def bessel(cls, alpha: float, include_constants: bool = True) -> "KernelSpec":
        return cls("bessel", (alpha,), include_constants)

    @classmethod
    def fractional(cls, h1: float, h2: float, h3: float, include_constants: bool = True) -> "KernelSpec":
        return cls("fractional", (h1, h2, h3), include_constants)

    @classmethod
    def smoothed_riesz(cls, beta: float, include_constants: bool = True) -> "KernelSpec":
        return cls("smoothed_riesz", (beta,), include_constants)

    def _validate(self) -> None:
        p = self.params
        if self.family == "riesz" and not 0.0 < p[0] < 2.0:
            raise ValueError("Riesz kernel needs 0 < beta < 2")
        if self.family == "smoothed_riesz" and not 0.0 < p[0] < 3.0:
            raise ValueError("smoothed Riesz kernel needs 0 < beta < 3")
        if self.family == "bessel" and not p[0] > 1.0:
            raise ValueError("Bessel kernel needs alpha > 1")
        if self.family == "fractional" and not all(0.5 < h < 1.0 for h in p):
            raise ValueError("fractional kernel needs 1/2 < H_i < 1")

    def _build_density(self) -> SpectralDensity:
        fam, p, k = self.family, self.params, self.include_constants
        if fam == "riesz":
            beta = p[0]
            c = riesz_constant(beta) / (2 * math.pi) ** 3 if k else 1.0
            dens = SpectralDensity(fam, lambda r: c * r ** (beta - 3.0), beta - 3.0, beta - 3.0,
                                   tail=((c, beta - 3.0),))
        elif fam == "smoothed_riesz":
            beta = p[0]
            c = riesz_constant(beta) * math.pi ** 1.5 / (2 * math.pi) ** 3 if k else 1.0
            dens = SpectralDensity(fam, lambda r: c * np.exp(-r * r / 4.0) * r ** (beta - 3.0),
                                   beta - 3.0, -math.inf, effective_cutoff=16.0)
        elif fam == "bessel":
            alpha = p[0]
            c = bessel_constant(alpha) if k else 1.0
            # (1 + r^2)^(-alpha/2) = sum_j binom(-alpha/2, j) r^(-alpha-2j), r > 1
            coefs = [1.0]
            for j in range(1, 8):
                coefs.append(coefs[-1] * (-alpha / 2.0 - j + 1) / j)
            tail = tuple((c * cj, -alpha - 2.0 * j) for j, cj in enumerate(coefs))
            dens = SpectralDensity(fam, lambda r: c * (1.0 + r * r) ** (-alpha / 2.0), 0.0, -alpha,
                                   tail=tail)
        else:
            c = math.prod(fractional_constant(h) / (2 * math.pi) for h in p) if k else 1.0
            e = 3.0 - 2.0 * sum(p)
            dens = SpectralDensity(fam, lambda r: c * r ** e, e, e,
                                   angular_exponents=tuple(1.0 - 2.0 * h for h in p),
                                   tail=((c, e),))
        if self.warning:
            return dens
        cert = integrate_spectral(
            lambda xi: 1.0 / (1.0 + np.einsum("ij,ij->i", xi, xi)), dens,
            QuadratureSpec(radial_nodes=128, sphere_nodes=110, radial_cutoff=1e6,
                           tolerance=1e-6, tail_exponent_hint=-2.0),
            require_tail=False)
        return SpectralDensity(dens.family, dens.radial_fn, dens.radial_exponent,
                               dens.tail_decay_exponent, dens.angular_exponents, dens.tail,
                               dens.effective_cutoff, h2_certificate=cert)

    # -- properties ----------------------------------------------------------

    @property
    def name(self) -> str:
        names = _PARAM_NAMES[self.family]
        args = ", ".join(f"{n}={v:g}" for n, v in zip(names, self.params))
        return f"{self.family}({args})"

    @property
    def param_dict(self) -> dict:
        return dict(zip(_PARAM_NAMES[self.family], self.params))

    @property
    def is_radial(self) -> bool:
        return self.family != "fractional"

    @property
    def warning(self) -> bool:
        """True for fractional kernels with ``H1 + H2 + H3 <= 2``."""
        return self.family == "fractional" and sum(self.params) <= 2.0

    @property
    def kappa_bar(self) -> Optional[float]:
        return sum(self.params) - 2.0 if self.family == "fractional" else None

    @property
    def c_h(self) -> float:
        """``prod H_i (2 H_i - 1)`` (fractional only; 1 otherwise)."""
        if self.family != "fractional":
            return 1.0
        return math.prod(h * (2.0 * h - 1.0) for h in self.params)

    @property
    def origin_singularity_exponent(self) -> float:
        """``p >= 0`` with ``f(x) <= C |x|**(-p)`` near 0 along rays."""
        p = self.params
        if self.family == "riesz":
            return p[0]
        if self.family == "bessel":
            return max(3.0 - p[0], 0.0)
        if self.family == "fractional":
            return 6.0 - 2.0 * sum(p)
        return 0.0

    @property
    def axis_exponents(self) -> Optional[tuple[float, float, float]]:
        """Powers ``2 H_i - 2`` of the fractional kernel (else ``None``)."""
        if self.family != "fractional":
            return None
        return tuple(2.0 * h - 2.0 for h in self.params)

    # -- evaluation ------------------------------------------------------------

    def f_radial(self, r) -> np.ndarray:
        """Radial profile ``f(r)`` of an isotropic kernel (``+inf`` where singular)."""
        if not self.is_radial:
            raise TypeError("the fractional kernel is not radial")
        r = np.asarray(r, dtype=float)
        if self.family == "riesz":
            with np.errstate(divide="ignore"):
                return np.where(r == 0.0, np.inf, np.abs(r) ** (-self.params[0]))
        return self._profile(np.abs(r))

    def f(self, x) -> np.ndarray:
        """Kernel values at points ``x`` (``(3,)`` or ``(N, 3)``)."""
        arr = np.asarray(x, dtype=float)
        pts = np.atleast_2d(arr)
        if self.family == "fractional":
            c = self.c_h if self.include_constants else 1.0
            a = np.asarray(self.axis_exponents)
            with np.errstate(divide="ignore"):
                out = c * np.prod(np.abs(pts) ** a[None, :], axis=1)
            out = np.where(np.any(pts == 0.0, axis=1), np.inf, out)
        else:
            out = self.f_radial(np.linalg.norm(pts, axis=1))
        return out[0] if arr.ndim == 1 else out

    def as_dict(self) -> dict:
        return {"family": self.family, "params": self.param_dict,
                "include_constants": self.include_constants}


def make_kernel(family: str, include_constants: bool = True, **params: float) -> KernelSpec:
    """Build a :class:`KernelSpec` from a family name and named parameters.

    Examples
    --------
    >>> make_kernel("riesz", beta=1.0).name
    'riesz(beta=1)'
    """
    fam = _ALIASES.get(str(family).lower())
    if fam is None:
        raise ValueError(f"unknown kernel family {family!r}; choose from {FAMILIES}")
    names = _PARAM_NAMES[fam]
    missing = [n for n in names if n not in params]
    extra = [n for n in params if n not in names]
    if missing or extra:
        raise ValueError(f"{fam} takes parameters {names}")
    return KernelSpec(fam, tuple(params[n] for n in names), include_constants)


def eval_f(kernel: KernelSpec, x) -> np.ndarray:
    """Kernel value ``f(x)``; ``+inf`` exactly on the singular set."""
    return kernel.f(x)


def eval_spectral_density(kernel: KernelSpec, xi) -> np.ndarray:
    """Spectral density at ``xi``; raises ``ValueError`` on the singular set."""
    return kernel.density(xi)


def predicted_exponents(kernel: KernelSpec) -> PredictedExponents:
    """Suprema of the exponents for which the regularity conditions hold."""
    p = kernel.params
    if kernel.family == "riesz":
        beta = p[0]
        return PredictedExponents(nu_sup=min(2.0 - beta, 1.0), gamma_sup=(2.0 - beta) / 2.0,
                                  rho1_sup=min(2.0 - beta, 1.0), rho2_sup=2.0 - beta)
    if kernel.family == "bessel":
        a = p[0] - 1.0
        return PredictedExponents(nu_sup=min(a, 1.0), gamma_sup=min(a, 1.0),
                                  gamma_prime_sup=min(a, 2.0), rho1_sup=min(a, 1.0),
                                  rho2_sup=min(a, 2.0))
    if kernel.family == "smoothed_riesz":
        return PredictedExponents(gamma_sup=min((3.0 - p[0]) / 2.0, 1.0))
    kb = sum(p) - 2.0
    if kb <= 0:
        return PredictedExponents(kappa_bar=kb)
    rho = min(min(2.0 * h - 1.0 for h in p), 2.0 * kb)
    return PredictedExponents(kappa_bar=kb, nu_sup=min(2.0 * kb, 1.0), rho1_sup=rho, rho2_sup=rho,
                              per_direction_space=tuple(min(h - 0.5, kb) for h in p))
