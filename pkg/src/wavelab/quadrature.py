"""Deterministic quadrature engines.

Four integral geometries are covered:

* weighted balls and shells in R^3 (radial substitution absorbs a power
  singularity at the origin),
* full-space spectral integrals against a spectral density, either through a
  generic tensor rule or through an exact zonal reduction with analytic
  oscillatory tails,
* products ``[0, T] x S^2 x S^2``,
* half-lines ``(0, inf)`` via a logarithmic substitution.

Every public integrator returns an :class:`Integral` holding the value and a
:class:`Certificate`.  The certificate is obtained by recomputing with the
refined specification (radial nodes doubled, angular rule roughly doubled) and
comparing.  Node placement is fixed in advance, and all reductions go through
:func:`pairwise_sum`, so results never depend on how work is scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import special
from scipy.integrate import lebedev_rule

__all__ = [
    "QuadratureError",
    "QuadratureSpec",
    "Certificate",
    "Integral",
    "SphereRule",
    "WeightedSphereRule",
    "TrigTerm",
    "ZonalIntegrand",
    "pairwise_sum",
    "gauss_legendre",
    "gauss_jacobi",
    "composite_rule",
    "graded_breaks",
    "graded_rule",
    "lebedev_sphere",
    "octant_jacobi_rule",
    "axis_angular_mass",
    "zonal_pushforward",
    "power_cos_tail",
    "spectral_radial_rule",
    "certify",
    "integrate_shell_weighted",
    "integrate_spectral",
    "integrate_zonal_spectral",
    "integrate_sphere_product",
    "integrate_halfline",
]

# (degree, node count) of scipy's Lebedev tables with all-positive weights
# (degrees 13, 25 and 27 carry negative weights and are skipped).
_LEBEDEV = (
    (3, 6), (5, 14), (7, 26), (9, 38), (11, 50), (15, 86),
    (17, 110), (19, 146), (21, 170), (23, 194),
    (29, 302), (31, 350), (35, 434), (41, 590), (47, 770), (53, 974),
    (59, 1202), (65, 1454), (71, 1730), (77, 2030), (83, 2354),
    (89, 2702), (95, 3074), (101, 3470), (107, 3890), (113, 4334),
    (119, 4802), (125, 5294), (131, 5810),
)

_GRADE_RATIO = 0.2


class QuadratureError(RuntimeError):
    """Raised when a quadrature fails to certify.

    Parameters
    ----------
    message : str
        Human readable diagnosis.
    values : tuple of float, optional
        The competing values (base and refined) or the offending bound.
    """

    def __init__(self, message: str, values: Sequence[float] = ()):
        super().__init__(message)
        self.values = tuple(float(v) for v in values)


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts, cutoffs and tolerance shared by all integrators.

    Attributes
    ----------
    radial_nodes : int
        Radial resolution budget.  Panels carry ``radial_nodes // 16`` Gauss
        nodes each (clamped to ``[4, 64]``) and graded regions use the same
        number of geometric layers (clamped to ``[8, 48]``).
    sphere_nodes : int
        Minimal number of angular nodes; the smallest Lebedev rule with at
        least this many nodes is used.
    radial_cutoff : float
        Spectral cutoff ``Lambda``.
    split_radius : float
        Boundary between the graded inner region and the outer panels.
    tolerance : float
        Relative self-convergence target.
    tail_exponent_hint : float
        Power ``q`` with ``|g(xi)| <= C |xi|**q`` at infinity (generic
        spectral route only).
    frequency_hint : float
        Largest radial oscillation frequency of the integrand; outer panels
        are capped at one period.
    """

    radial_nodes: int = 256
    sphere_nodes: int = 434
    radial_cutoff: float = 1.0e3
    split_radius: float = 1.0
    tolerance: float = 1.0e-4
    tail_exponent_hint: float = 0.0
    frequency_hint: float = 0.0

    def __post_init__(self):
        if self.radial_nodes < 16:
            raise ValueError("radial_nodes must be at least 16")
        if self.sphere_nodes < 1:
            raise ValueError("sphere_nodes must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if not self.split_radius > 0:
            raise ValueError("split_radius must be positive")
        if not self.radial_cutoff > self.split_radius:
            raise ValueError("radial_cutoff must exceed split_radius")
        if self.frequency_hint < 0:
            raise ValueError("frequency_hint must be nonnegative")

    @property
    def panel_order(self) -> int:
        return int(min(max(self.radial_nodes // 16, 4), 64))

    @property
    def layers(self) -> int:
        return int(min(max(self.radial_nodes // 16, 8), 48))

    def refined(self) -> "QuadratureSpec":
        """Return the specification used for the convergence certificate."""
        return replace(self, radial_nodes=2 * self.radial_nodes,
                       sphere_nodes=2 * self.sphere_nodes)

    def as_dict(self) -> dict:
        return {
            "radial_nodes": self.radial_nodes,
            "sphere_nodes": self.sphere_nodes,
            "radial_cutoff": self.radial_cutoff,
            "split_radius": self.split_radius,
            "tolerance": self.tolerance,
            "tail_exponent_hint": self.tail_exponent_hint,
            "frequency_hint": self.frequency_hint,
        }


@dataclass(frozen=True)
class Certificate:
    """Self-convergence record of one integral.

    ``delta`` is ``|refined - base| / max(|refined|, floor)``.  ``tail_bound``
    is an analytic bound on any truncated part that was not integrated
    (zero when the tail was integrated exactly or is absent).
    """

    base_value: float
    refined_value: float
    delta: float
    tolerance: float
    tail_bound: float = 0.0
    converged: bool = True

    def as_dict(self) -> dict:
        return {
            "base_value": self.base_value,
            "refined_value": self.refined_value,
            "delta": self.delta,
            "tolerance": self.tolerance,
            "tail_bound": self.tail_bound,
            "converged": self.converged,
        }


@dataclass(frozen=True)
class Integral:
    """A certified quadrature result; ``value`` is the refined estimate."""

    value: float
    certificate: Certificate

    def __float__(self) -> float:
        return float(self.value)


# ---------------------------------------------------------------------------
# elementary rules


def pairwise_sum(values, axis: int = -1) -> np.ndarray:
    """Sum along ``axis`` with a fixed binary tree.

    The reduction order depends only on the length of the axis, which keeps
    results bit-identical however the terms were produced.
    """
    a = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    n = a.shape[-1]
    if n == 0:
        return np.zeros(a.shape[:-1])
    size = 1 << (n - 1).bit_length()
    if size != n:
        pad = np.zeros(a.shape[:-1] + (size - n,))
        a = np.concatenate([a, pad], axis=-1)
    while a.shape[-1] > 1:
        half = a.shape[-1] // 2
        a = a[..., :half] + a[..., half:]
    return a[..., 0]


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on ``[-1, 1]`` (cached, read-only)."""
    x, w = np.polynomial.legendre.leggauss(int(n))
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


@lru_cache(maxsize=None)
def gauss_jacobi(n: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Jacobi rule for the weight ``(1-x)**alpha (1+x)**beta``."""
    x, w = special.roots_jacobi(int(n), float(alpha), float(beta))
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def composite_rule(breaks, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on consecutive ``breaks``."""
    b = np.asarray(breaks, dtype=float)
    x, w = gauss_legendre(n)
    lo, hi = b[:-1, None], b[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo) + half * x[None, :]).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


def graded_breaks(a: float, b: float, layers: int, side: str = "left",
                  ratio: float = _GRADE_RATIO) -> np.ndarray:
    """Breakpoints on ``[a, b]`` refined geometrically toward one or both ends.

    Parameters
    ----------
    side : {"left", "right", "both"}
        Which end(s) carry the singularity.
    """
    if side == "both":
        mid = 0.5 * (a + b)
        left = graded_breaks(a, mid, layers, "left", ratio)
        right = graded_breaks(mid, b, layers, "right", ratio)
        return np.concatenate([left, right[1:]])
    k = np.arange(layers, 0, -1, dtype=float)
    frac = np.concatenate([[0.0], ratio ** k, [1.0]])
    if side == "left":
        return a + (b - a) * frac
    if side == "right":
        return (b - (b - a) * frac)[::-1]
    raise ValueError(f"unknown side {side!r}")


def graded_rule(a: float, b: float, layers: int, side: str, n: int,
                ratio: float = _GRADE_RATIO, power: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule graded toward ``side`` with a polynomial end map.

    Geometric panels shrink toward the singular end; the innermost panel
    ``[e, e + h]`` additionally uses ``x = e + h t**power``, which turns an
    integrable endpoint power ``|x - e|**lam`` (``lam > -1``) into a bounded
    integrand.
    """
    breaks = graded_breaks(a, b, layers, side, ratio)
    nodes, weights = composite_rule(breaks, n)
    x, w = gauss_legendre(n)
    t = 0.5 * (x + 1.0)
    jac = power * t ** (power - 1) * 0.5 * w
    ends = []
    if side in ("left", "both"):
        ends.append((breaks[0], breaks[1] - breaks[0], 0))
    if side in ("right", "both"):
        ends.append((breaks[-1], breaks[-2] - breaks[-1], len(breaks) - 2))
    for e, h, panel in ends:
        sl = slice(panel * n, (panel + 1) * n)
        nodes[sl] = e + h * t ** power
        weights[sl] = abs(h) * jac
    return nodes, weights


# ---------------------------------------------------------------------------
# sphere rules


@dataclass(frozen=True)
class SphereRule:
    """Angular rule on the unit sphere whose weights sum to ``4 pi``.

    Attributes
    ----------
    nodes : ndarray, shape (M, 3)
        Unit vectors.
    weights : ndarray, shape (M,)
        Positive weights.
    degree : int
        Polynomial degree integrated exactly.
    """

    nodes: np.ndarray
    weights: np.ndarray
    degree: int

    @property
    def order(self) -> int:
        """Number of angular nodes."""
        return int(self.weights.size)

    def validate(self) -> None:
        norms = np.linalg.norm(self.nodes, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-12:
            raise ValueError("sphere nodes are not unit vectors")
        if np.any(self.weights <= 0):
            raise ValueError("sphere weights must be positive")
        if abs(pairwise_sum(self.weights) - 4 * math.pi) > 1e-10:
            raise ValueError("sphere weights do not sum to 4 pi")


@dataclass(frozen=True)
class WeightedSphereRule:
    """Angular rule for ``int W(w) h(w) dsigma`` with ``W = prod |w_i|**b_i``.

    ``weights`` already contain ``W``, so the rule is applied to ``h`` only.
    No node lies on a coordinate plane.
    """

    nodes: np.ndarray
    weights: np.ndarray
    exponents: tuple[float, float, float]

    @property
    def order(self) -> int:
        return int(self.weights.size)

    def density(self) -> np.ndarray:
        """``W`` evaluated at the nodes."""
        return np.prod(np.abs(self.nodes) ** np.asarray(self.exponents), axis=1)


@lru_cache(maxsize=None)
def lebedev_sphere(min_nodes: int) -> SphereRule:
    """Smallest tabulated Lebedev rule with at least ``min_nodes`` nodes."""
    for degree, count in _LEBEDEV:
        if count >= min_nodes:
            break
    x, w = lebedev_rule(degree)
    nodes = np.ascontiguousarray(x.T)
    nodes /= np.linalg.norm(nodes, axis=1)[:, None]
    rule = SphereRule(nodes=nodes, weights=np.asarray(w, dtype=float), degree=degree)
    rule.validate()
    return rule


def axis_angular_mass(exponents) -> float:
    """Closed form of ``int_{S^2} prod |w_i|**b_i dsigma``."""
    b = np.asarray(exponents, dtype=float)
    if np.any(b <= -1):
        raise ValueError("angular exponents must exceed -1")
    logs = special.gammaln((b + 1) / 2).sum() - special.gammaln(((b + 1) / 2).sum())
    return float(2.0 * math.exp(logs))


@lru_cache(maxsize=None)
def octant_jacobi_rule(exponents: tuple[float, float, float], n: int) -> WeightedSphereRule:
    """Tensor Gauss-Jacobi rule for axis-singular angular weights.

    In the positive octant the substitutions ``c = sin^2(theta)`` (azimuth)
    and ``e = cos^2(phi)`` (polar) turn ``prod |w_i|**b_i dsigma`` into two
    Jacobi weights; the eight octants follow by reflection.
    """
    a1, a2, a3 = (float(e) for e in exponents)
    al, be = (a1 - 1) / 2, (a2 - 1) / 2
    x, lam = gauss_jacobi(n, al, be)
    theta = np.arcsin(np.sqrt((1 + x) / 2))
    wt = lam * 2.0 ** (-al - be) / 4
    al2, be2 = (a1 + a2) / 2, (a3 - 1) / 2
    y, lam2 = gauss_jacobi(n, al2, be2)
    phi = np.arccos(np.sqrt((1 + y) / 2))
    wp = lam2 * 2.0 ** (-al2 - be2) / 4
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    octant = np.stack([np.sin(ph) * np.cos(th), np.sin(ph) * np.sin(th), np.cos(ph)], axis=-1)
    octant = octant.reshape(-1, 3)
    w = np.outer(wt, wp).ravel()
    signs = np.array([[sx, sy, sz] for sx in (1, -1) for sy in (1, -1) for sz in (1, -1)], dtype=float)
    nodes = (signs[:, None, :] * octant[None, :, :]).reshape(-1, 3)
    weights = np.tile(w, 8)
    return WeightedSphereRule(nodes=nodes, weights=weights, exponents=(a1, a2, a3))


def _angular_rule(exponents, spec: QuadratureSpec):
    if exponents is None:
        return lebedev_sphere(spec.sphere_nodes)
    n = max(4, int(math.ceil(math.sqrt(spec.sphere_nodes / 8.0))))
    return octant_jacobi_rule(tuple(float(e) for e in exponents), n)


def _rule_arrays(rule) -> tuple[np.ndarray, np.ndarray]:
    return rule.nodes, rule.weights


def _frame(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k = int(np.argmin(np.abs(u)))
    e = np.zeros(3)
    e[k] = 1.0
    e1 = np.cross(u, e)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(u, e1)


@lru_cache(maxsize=None)
def _end_weighted_panel(blo: float, bhi: float, n: int, layers: int):
    """Reference rule on ``[0, 1]`` with end powers ``blo``, ``bhi``.

    The panel is graded geometrically toward both ends.  The two end
    subpanels use Gauss-Jacobi rules carrying ``|t - end|**b``.  For a smooth
    ``g`` and a panel ``[lo, hi]`` of length ``L`` the integral of ``g * |phi - end|**b``
    is ``L * sum(weights * F(lo + L * nodes) / divisor)`` with
    ``F = g * |phi - end|**b``.
    """
    breaks = graded_breaks(0.0, 1.0, layers, "both")
    nodes, weights = composite_rule(breaks, n)
    divisor = np.ones(nodes.size)
    for panel, e, b, left in ((0, breaks[0], blo, True),
                              (len(breaks) - 2, breaks[-1], bhi, False)):
        if b == 0.0:
            continue
        a0, a1 = breaks[panel], breaks[panel + 1]
        half = 0.5 * (a1 - a0)
        if left:
            x, lam = gauss_jacobi(n, 0.0, b)
        else:
            x, lam = gauss_jacobi(n, b, 0.0)
        sl = slice(panel * n, (panel + 1) * n)
        nodes[sl] = 0.5 * (a0 + a1) + half * x
        weights[sl] = lam * half ** (1.0 + b)
        with np.errstate(divide="ignore"):
            divisor[sl] = np.abs(nodes[sl] - e) ** b
    for arr in (nodes, weights, divisor):
        arr.flags.writeable = False
    return nodes, weights, divisor


def _circle_weight(b, v, e1, e2, c, s, phi):
    """``prod |w_i|**b_i`` at ``w = c v + s (cos(phi) e1 + sin(phi) e2)``."""
    cos, sin = np.cos(phi), np.sin(phi)
    out = np.ones(phi.shape)
    for i in range(3):
        out = out * np.abs(c * v[i] + s * (cos * e1[i] + sin * e2[i])) ** b[i]
    return out


def zonal_pushforward(exponents, axis, c, n_phi: int, layers: int = 6,
                      block: int = 256) -> np.ndarray:
    """Density of ``w . axis`` under ``prod |w_i|**b_i dsigma``.

    Returns ``nu(c) = int_0^{2 pi} W(w(c, phi)) dphi`` where ``w(c, phi)``
    sweeps the circle at height ``c`` around ``axis``.  The zeros of each
    ``w_i`` on the circle (and the points of closest approach to each
    coordinate plane) split ``[0, 2 pi)`` into panels; panels are graded
    toward their ends and carry Gauss-Jacobi end weights at zeros.
    """
    b = np.asarray(exponents, dtype=float)
    v = np.asarray(axis, dtype=float)
    v = v / np.linalg.norm(v)
    e1, e2 = _frame(v)
    radius = np.hypot(e1, e2)
    psi = np.arctan2(e2, e1)
    c = np.atleast_1d(np.asarray(c, dtype=float))
    out = np.empty(c.size)
    for start in range(0, c.size, block):
        cb = c[start:start + block]
        out[start:start + block] = _pushforward_block(b, v, e1, e2, radius, psi, cb,
                                                      n_phi, layers)
    return out


def _pushforward_block(b, v, e1, e2, radius, psi, c, n_phi, layers):
    two_pi = 2 * math.pi
    m = c.size
    s = np.sqrt(np.maximum(1.0 - c * c, 0.0))
    angles, powers = [], []
    for i in range(3):
        live = (radius[i] >= 1e-14) & (s > 0.0)
        for extreme in (psi[i], psi[i] + math.pi):
            angles.append(np.where(live, extreme % two_pi, np.inf))
            powers.append(np.zeros(m))
        with np.errstate(divide="ignore", invalid="ignore"):
            kap = -c * v[i] / (s * radius[i])
        hit = live & (np.abs(kap) < 1.0)
        ac = np.arccos(np.clip(kap, -1.0, 1.0))
        for sign in (1.0, -1.0):
            angles.append(np.where(hit, (psi[i] + sign * ac) % two_pi, np.inf))
            powers.append(np.full(m, b[i]))
    ang = np.stack(angles, axis=1)
    pw = np.stack(powers, axis=1)
    order = np.argsort(ang, axis=1, kind="stable")
    ang = np.take_along_axis(ang, order, axis=1)
    pw = np.take_along_axis(pw, order, axis=1)
    count = np.isfinite(ang).sum(axis=1)
    # coincident marks (a root on top of another coordinate's extreme) share
    # the singular exponent so that the surviving panel end carries it
    slots = ang.shape[1]
    idx = np.arange(slots)[None, :]
    live = idx < count[:, None]
    period = np.maximum(count, 1)[:, None]
    nxt = (idx + 1) % period
    prv = (idx - 1) % period
    after = np.take_along_axis(ang, nxt, axis=1)
    with np.errstate(invalid="ignore"):
        gap = np.abs(after - ang)
        gap = np.minimum(gap, two_pi - gap)
    close = (gap < 1e-12) & live
    for _ in range(2):
        left = np.where(close, np.take_along_axis(pw, nxt, axis=1), 0.0)
        right = np.where(np.take_along_axis(close, prv, axis=1) & live,
                         np.take_along_axis(pw, prv, axis=1), 0.0)
        pw = np.minimum(pw, np.minimum(left, right))
    # panel p of row j runs from mark p to mark p+1 (cyclically)
    hi = np.take_along_axis(ang, nxt, axis=1)
    hi = np.where(np.arange(slots)[None, :] == count[:, None] - 1, hi + two_pi, hi)
    bhi = np.take_along_axis(pw, nxt, axis=1)
    valid = (np.arange(slots)[None, :] < count[:, None])
    with np.errstate(invalid="ignore"):
        length = np.where(valid, hi - ang, 0.0)
    valid &= length > 1e-15

    sums = np.zeros((m, slots))
    jj, pp = np.nonzero(valid)
    keys = np.stack([pw[jj, pp], bhi[jj, pp]], axis=1)
    for pair in np.unique(keys, axis=0):
        sel = np.all(keys == pair, axis=1)
        j, p = jj[sel], pp[sel]
        t, w, div = _end_weighted_panel(float(pair[0]), float(pair[1]), n_phi, layers)
        lo, L = ang[j, p][:, None], length[j, p][:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            # the L**b of the divisor cancels against the L**(1+b) of the weights
            vals = _circle_weight(b, v, e1, e2, c[j][:, None], s[j][:, None], lo + L * t) / div
        vals = np.where(np.isfinite(vals), vals, 0.0)
        sums[j, p] = L[:, 0] * pairwise_sum(w * vals, axis=1)
    out = pairwise_sum(sums, axis=1)

    bare = count == 0
    if np.any(bare):
        xt = np.linspace(0.0, two_pi, 4 * n_phi, endpoint=False)
        vals = _circle_weight(b, v, e1, e2, c[bare][:, None], s[bare][:, None], xt[None, :])
        out[bare] = pairwise_sum(vals, axis=1) * (two_pi / xt.size)
    return out


# ---------------------------------------------------------------------------
# oscillatory power tails


def _falling_series(q: float, z: np.ndarray, terms: int = 60) -> np.ndarray:
    """``E(q, z) = int_z^inf s**q e^{i s} ds`` for large ``z`` (complex)."""
    total = np.zeros(z.shape, dtype=complex)
    coef = 1.0
    for k in range(terms):
        term = (1j) ** (k + 1) * coef * z ** (q - k)
        total += term
        coef *= (q - k)
        if coef == 0.0:
            break
        if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
            break
    return np.exp(1j * z) * total


_Z_ASYMPTOTIC = 40.0


def _oscillatory_unit(q: float, z: np.ndarray, phase: float) -> np.ndarray:
    """``J(q, z, phase) = int_z^inf s**q cos(s + phase) ds`` for ``z > 0``."""
    z = np.asarray(z, dtype=float)
    out = np.empty(z.shape)
    big = z >= _Z_ASYMPTOTIC
    if np.any(big):
        out[big] = np.real(np.exp(1j * phase) * _falling_series(q, z[big]))
    small = ~big
    if np.any(small):
        zs = z[small]
        far = np.real(np.exp(1j * phase) * _falling_series(q, np.array([_Z_ASYMPTOTIC])))[0]
        # uniform panels on [1, 40]
        x, w = gauss_legendre(20)
        uni = np.arange(1.0, _Z_ASYMPTOTIC, 1.0)
        lo = np.maximum(zs[:, None], uni[None, :])
        hi = np.maximum(zs[:, None], uni[None, :] + 1.0)
        half = 0.5 * (hi - lo)
        sn = 0.5 * (hi + lo)[..., None] + half[..., None] * x
        mid = pairwise_sum(pairwise_sum(half[..., None] * w * sn ** q * np.cos(sn + phase)))
        # logarithmic panels on [max(z, 1e-8), 1]
        zl = np.minimum(np.maximum(zs, 1e-8), 1.0)
        ul = np.log(zl)
        npan = 40
        edges = ul[:, None] * (1.0 - np.arange(npan + 1)[None, :] / npan)
        lo, hi = edges[:, :-1], edges[:, 1:]
        half = 0.5 * (hi - lo)
        un = 0.5 * (hi + lo)[..., None] + half[..., None] * x
        sn = np.exp(un)
        low = pairwise_sum(pairwise_sum(half[..., None] * w * sn ** (q + 1) * np.cos(sn + phase)))
        # analytic piece on [z, 1e-8] using cos(s+p) ~ cos p - s sin p
        tiny = zs < 1e-8
        extra = np.zeros(zs.shape)
        if np.any(tiny):
            a = zs[tiny]
            e = 1e-8
            extra[tiny] = (math.cos(phase) * _power_int(q, a, e)
                           - math.sin(phase) * _power_int(q + 1, a, e))
        out[small] = extra + low + mid + far
    return out


_Z_TINY = 1e-8


def _tiny_frequency_tail(q: float, a: np.ndarray, phase: float, cutoff: float) -> np.ndarray:
    """``power_cos_tail`` for ``a L < 1e-8`` without overflowing ``(a L)**(q+1)``.

    The stretch ``[L, R]`` with ``R = 1e-8 / a`` uses ``cos(a r + p) ~ cos p -
    a r sin p`` in ``r`` directly; powers of ``R`` are formed in log space.
    """
    la = np.log(a)
    lr = math.log(_Z_TINY) - la
    lL = math.log(cutoff)

    def scaled_int(k: float, scale_log):
        # exp(scale_log) * int_L^R r^k dr
        if abs(k + 1) < 1e-15:
            return np.exp(scale_log) * (lr - lL)
        return (np.exp(scale_log + (k + 1) * lr) - np.exp(scale_log + (k + 1) * lL)) / (k + 1)

    near = math.cos(phase) * scaled_int(q, 0.0) - math.sin(phase) * scaled_int(q + 1, la)
    far = np.exp((-q - 1) * la) * _oscillatory_unit(q, np.full(a.shape, _Z_TINY), phase)
    return near + far


def _power_int(q: float, a, b):
    if abs(q + 1) < 1e-15:
        return np.log(b / a)
    return (b ** (q + 1) - a ** (q + 1)) / (q + 1)


def power_cos_tail(q: float, a, phase: float, cutoff: float) -> np.ndarray:
    """Exact ``int_L^inf r**q cos(a r + phase) dr`` for ``L > 0``.

    Parameters
    ----------
    q : float
        Power; must be ``< -1`` when ``a == 0`` and ``< 0`` otherwise.
    a : array_like
        Frequencies (any sign).
    phase : float
    cutoff : float
        Lower limit ``L``.

    Notes
    -----
    With ``r = s / |a|`` the integral becomes ``|a|**(-q-1) J(q, |a| L)``.
    For ``|a| L >= 40`` the integration-by-parts series is summed to machine
    precision; below that the finite stretch up to 40 is integrated with
    Gauss-Legendre panels (logarithmic near 0) and the series supplies the
    remainder.
    """
    a = np.asarray(a, dtype=float)
    flat = np.atleast_1d(a).ravel()
    out = np.empty(flat.shape)
    zero = flat == 0.0
    if np.any(zero):
        if q >= -1:
            raise QuadratureError(f"non-oscillatory tail with power {q} diverges")
        out[zero] = math.cos(phase) * cutoff ** (q + 1) / (-(q + 1))
    nz = ~zero
    if np.any(nz):
        if q >= 0:
            raise QuadratureError(f"oscillatory tail with power {q} is not integrable")
        aa = np.abs(flat[nz])
        ph = np.where(flat[nz] > 0, phase, -phase)
        res = np.empty(aa.shape)
        z = aa * cutoff
        tiny = z < _Z_TINY
        for p in np.unique(ph):
            sel = (ph == p) & ~tiny
            res[sel] = aa[sel] ** (-q - 1) * _oscillatory_unit(q, z[sel], float(p))
            sel = (ph == p) & tiny
            if np.any(sel):
                res[sel] = _tiny_frequency_tail(q, aa[sel], float(p), cutoff)
        out[nz] = res
    return out.reshape(a.shape)


# ---------------------------------------------------------------------------
# certification


def certify(compute: Callable[[QuadratureSpec], float], spec: QuadratureSpec,
            *, floor: float = 0.0, tail_bound: float = 0.0,
            what: str = "integral") -> Integral:
    """Evaluate ``compute`` at ``spec`` and ``spec.refined()``.

    Raises
    ------
    QuadratureError
        When the relative change exceeds ``spec.tolerance``.
    """
    base = float(compute(spec))
    fine = float(compute(spec.refined()))
    if not (np.isfinite(base) and np.isfinite(fine)):
        raise QuadratureError(f"{what}: non-finite quadrature value", (base, fine))
    scale = max(abs(fine), floor)
    delta = 0.0 if scale == 0.0 else abs(fine - base) / scale
    if delta > spec.tolerance:
        raise QuadratureError(
            f"{what} did not converge: base={base!r}, refined={fine!r}, "
            f"relative change {delta:.3e} > {spec.tolerance:.1e}",
            (base, fine),
        )
    cert = Certificate(base_value=base, refined_value=fine, delta=delta,
                       tolerance=spec.tolerance, tail_bound=tail_bound)
    return Integral(value=fine, certificate=cert)


# ---------------------------------------------------------------------------
# shells


def _shell_radial_rule(r_lo: float, r_hi: float, q: float, spec: QuadratureSpec):
    """Radial nodes and weights for ``int g r^2 dr`` (weights include r^2)."""
    n, L = spec.panel_order, spec.layers
    if r_lo == 0.0:
        e = 3.0 - q
        u_hi = r_hi ** e
        u, wu = graded_rule(0.0, u_hi, L, "left", n)
        r = u ** (1.0 / e)
        # g r^2 dr = g r^q du / e
        return r, wu * r ** q / e
    if r_hi / r_lo > 2.0:
        k = max(2, int(math.ceil(math.log(r_hi / r_lo) / math.log(1.5))))
        breaks = r_lo * (r_hi / r_lo) ** (np.arange(k + 1) / k)
    else:
        breaks = np.linspace(r_lo, r_hi, 3)
    r, wr = composite_rule(breaks, n)
    return r, wr * r * r


def integrate_shell_weighted(g: Callable[[np.ndarray], np.ndarray], r_lo: float, r_hi: float,
                             singularity_exponent: float, spec: QuadratureSpec, *,
                             isotropic: bool = False, axis_exponents=None,
                             rotation: Optional[np.ndarray] = None) -> Integral:
    """Certified ``int_{r_lo <= |x| <= r_hi} g(x) dx``.

    Parameters
    ----------
    g : callable
        Maps an ``(N, 3)`` array of points to ``(N,)`` values.
    singularity_exponent : float
        ``p < 3`` with ``|g(x)| <= C |x|**(-p)`` near the origin.  With
        ``r_lo == 0`` the substitution ``u = r**(3 - p)`` removes it.
    isotropic : bool
        Declare ``g`` radial; a single direction is then evaluated.
    axis_exponents : sequence of 3 floats, optional
        When ``g`` behaves like ``prod |x_i|**a_i`` near coordinate planes,
        a Gauss-Jacobi octant rule carrying that weight is used and ``g`` is
        divided by it internally.
    rotation : ndarray, optional
        Orthogonal matrix applied to the angular nodes.
    """
    if r_lo < 0 or not r_hi > r_lo:
        raise ValueError("need 0 <= r_lo < r_hi")
    if singularity_exponent >= 3:
        raise ValueError("singularity exponent must be below 3")
    q = max(float(singularity_exponent), 0.0)

    def compute(sp: QuadratureSpec) -> float:
        r, wr = _shell_radial_rule(r_lo, r_hi, q, sp)
        if isotropic:
            pts = r[:, None] * np.array([0.0, 0.0, 1.0])[None, :]
            return 4 * math.pi * pairwise_sum(wr * np.asarray(g(pts), dtype=float))
        rule = _angular_rule(axis_exponents, sp)
        nodes, weights = _rule_arrays(rule)
        if rotation is not None:
            nodes = nodes @ np.asarray(rotation).T
        if axis_exponents is not None:
            weights = weights / rule.density()
        pts = (r[:, None, None] * nodes[None, :, :]).reshape(-1, 3)
        vals = np.asarray(g(pts), dtype=float).reshape(r.size, -1)
        return pairwise_sum(wr * pairwise_sum(vals * weights[None, :], axis=1))

    return certify(compute, spec, what="shell integral")


# ---------------------------------------------------------------------------
# spectral integrals


def spectral_radial_rule(spec: QuadratureSpec, small_power: float, frequency: float,
                         cutoff: float) -> tuple[np.ndarray, np.ndarray]:
    """Radial rule on ``[0, cutoff]`` for integrands ``~ r**small_power`` at 0.

    The inner region ``[0, split]`` is graded geometrically in
    ``u = r**theta`` with ``theta = small_power + 1`` for singular integrands,
    which makes the leading power constant in ``u``.  Outer panels grow by a
    factor 1.5 and are capped at one oscillation period.
    """
    if small_power <= -1:
        raise QuadratureError(f"radial integrand ~ r^{small_power} is not integrable at 0")
    n, L = spec.panel_order, spec.layers
    split = min(spec.split_radius, cutoff)
    theta = small_power + 1.0 if small_power < 0 else 1.0
    u, wu = graded_rule(0.0, split ** theta, L, "left", n)
    r_in = u ** (1.0 / theta)
    w_in = wu * r_in ** (1.0 - theta) / theta
    if cutoff <= split:
        return r_in, w_in
    cap = 2 * math.pi / frequency if frequency > 0 else math.inf
    breaks = [split]
    while breaks[-1] < cutoff:
        step = min(0.5 * breaks[-1], cap)
        breaks.append(min(breaks[-1] + step, cutoff))
    r_out, w_out = composite_rule(np.asarray(breaks), n)
    return np.concatenate([r_in, r_out]), np.concatenate([w_in, w_out])


def integrate_spectral(g: Callable[[np.ndarray], np.ndarray], density, spec: QuadratureSpec,
                       *, require_tail: bool = True) -> Integral:
    """Certified ``int_{R^3} g(xi) density(xi) dxi`` by a tensor rule.

    The inner ball and the shell up to ``spec.radial_cutoff`` are integrated
    numerically.  The part beyond the cutoff is not added; its analytic
    envelope ``C L**(q+1) / |q+1|`` is reported as ``tail_bound`` where
    ``q = tail_exponent_hint + density tail exponent + 2``.

    Parameters
    ----------
    g : callable
        Maps ``(N, 3)`` frequencies to ``(N,)`` values.
    density : SpectralDensity-like
        Needs ``radial``, ``angular_exponents``, ``radial_exponent`` and
        ``tail_decay_exponent``; see :mod:`wavelab.kernels`.
    require_tail : bool
        Raise when the tail bound exceeds ``tolerance * |value|``.
    """
    lam = density.radial_exponent + 2.0
    cutoff = spec.radial_cutoff
    eff = getattr(density, "effective_cutoff", None)
    if eff is not None:
        cutoff = min(cutoff, eff)

    def angular(sp):
        rule = _angular_rule(density.angular_exponents, sp)
        return rule.nodes, rule.weights

    def compute(sp: QuadratureSpec) -> float:
        nodes, weights = angular(sp)
        r, wr = spectral_radial_rule(sp, lam, sp.frequency_hint, cutoff)
        rad = density.radial(r) * wr
        shell = np.empty(r.size)
        block = max(1, 200000 // nodes.shape[0])
        for start in range(0, r.size, block):
            rr = r[start:start + block]
            pts = (rr[:, None, None] * nodes[None, :, :]).reshape(-1, 3)
            vals = np.asarray(g(pts), dtype=float).reshape(rr.size, -1)
            shell[start:start + block] = pairwise_sum(vals * weights[None, :], axis=1) * rr * rr
        return pairwise_sum(rad * shell)

    def tail_bound(sp: QuadratureSpec, value: float) -> float:
        if eff is not None and eff <= sp.radial_cutoff:
            return 0.0
        q = sp.tail_exponent_hint + density.tail_decay_exponent + 2.0
        if q >= -1:
            raise QuadratureError(
                f"integrand tail ~ r^{q} is not integrable; no finite cutoff suffices")
        nodes, weights = angular(sp)
        env = 0.0
        for frac in (0.5, 0.75, 1.0):
            rr = frac * cutoff
            vals = np.abs(np.asarray(g(rr * nodes), dtype=float))
            env = max(env, float(pairwise_sum(vals * weights)) * density.radial(np.array([rr]))[0]
                      * rr ** (2.0 - q))
        return env * cutoff ** (q + 1) / abs(q + 1)

    result = certify(compute, spec, what="spectral integral")
    bound = tail_bound(spec, result.value)
    if require_tail and bound > spec.tolerance * max(abs(result.value), 1e-300):
        raise QuadratureError(
            f"spectral tail bound {bound:.3e} exceeds tolerance; increase the cutoff "
            f"beyond {spec.radial_cutoff:g}", (result.value, bound))
    return Integral(value=result.value, certificate=replace(result.certificate, tail_bound=bound))


@dataclass(frozen=True)
class TrigTerm:
    """One term ``coef * r**power * cos((freq + shift * a) r + phase)``.

    ``a`` is the zonal projection ``xi_hat . v`` scaled by ``|v|``.
    """

    coef: float
    power: float
    freq: float = 0.0
    shift: float = 0.0
    phase: float = 0.0

    def times_cos(self, omega: float = 0.0, shift: float = 0.0) -> tuple["TrigTerm", "TrigTerm"]:
        """Product with ``cos((omega + shift a) r)`` as two terms."""
        half = 0.5 * self.coef
        return (
            TrigTerm(half, self.power, self.freq + omega, self.shift + shift, self.phase),
            TrigTerm(half, self.power, self.freq - omega, self.shift - shift, self.phase),
        )

    def evaluate(self, r, a):
        return self.coef * r ** self.power * np.cos((self.freq + self.shift * a) * r + self.phase)


def times_cos(terms: Sequence[TrigTerm], omega: float = 0.0, shift: float = 0.0) -> tuple[TrigTerm, ...]:
    """Multiply a term list by ``cos((omega + shift a) r)``."""
    out: list[TrigTerm] = []
    for t in terms:
        out.extend(t.times_cos(omega, shift))
    return tuple(out)


def scale_terms(terms: Sequence[TrigTerm], factor: float, power: float = 0.0) -> tuple[TrigTerm, ...]:
    """Multiply every term by ``factor * r**power``."""
    return tuple(replace(t, coef=t.coef * factor, power=t.power + power) for t in terms)


@dataclass(frozen=True)
class ZonalIntegrand:
    """Spectral integrand ``k(|xi|, xi_hat . v)`` that is even in the projection.

    Attributes
    ----------
    evaluate : callable
        ``evaluate(r, a)`` with broadcastable arrays ``r`` (radii) and ``a``
        (projections ``xi_hat . v``); must be numerically stable at small r.
    terms : tuple of TrigTerm
        Exact expansion of ``k`` valid for ``r >= split_radius``; it supplies
        the analytic tail beyond the cutoff.
    vector : ndarray or None
        Zonal axis ``v``; ``None`` means ``k`` is radial.
    small_power : float
        ``k(r, a) ~ r**small_power`` as ``r -> 0``.
    factor : callable or None
        Optional radial factor ``g(r)``; the integrand is then
        ``evaluate(r, a) * g(r)`` (the terms still describe the product).
    """

    evaluate: Callable[[np.ndarray, np.ndarray], np.ndarray]
    terms: tuple[TrigTerm, ...]
    vector: Optional[np.ndarray] = None
    small_power: float = 0.0
    factor: Optional[Callable[[np.ndarray], np.ndarray]] = None

    @property
    def norm(self) -> float:
        return 0.0 if self.vector is None else float(np.linalg.norm(self.vector))

    @property
    def max_frequency(self) -> float:
        d = self.norm
        return max((abs(t.freq) + abs(t.shift) * d for t in self.terms), default=0.0)


def _c_grid(breaks: Sequence[float], spec: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    n, L = spec.panel_order, max(spec.layers // 2, 8)
    nodes, weights = [], []
    pts = sorted(set(float(b) for b in breaks))
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi - lo < 1e-12:
            continue
        x, w = graded_rule(lo, hi, L, "both", n)
        nodes.append(x)
        weights.append(w)
    x, w = np.concatenate(nodes), np.concatenate(weights)
    # the end map can round nodes onto c = 1, where an axis-aligned
    # pushforward is infinite; such nodes carry weight below 1e-20
    keep = x < 1.0
    return x[keep], w[keep]


def integrate_zonal_spectral(integrand: ZonalIntegrand, density, spec: QuadratureSpec) -> Integral:
    """Certified ``int k(|xi|, xi_hat . v) density(xi) dxi`` with exact tails.

    The density must factor as ``radial(r) * W(xi_hat)`` with ``W`` either
    constant or ``prod |w_i|**b_i``.  Angular integration reduces exactly to
    one dimension in ``c = xi_hat . v_hat`` through the pushforward of ``W``;
    the radial integral runs up to the cutoff and the remainder is added in
    closed form from the term expansions of ``k`` and of the density tail.
    """
    d = integrand.norm
    b = density.angular_exponents
    cutoff = spec.radial_cutoff
    eff = getattr(density, "effective_cutoff", None)
    exact_tail = eff is None
    if eff is not None:
        cutoff = min(cutoff, eff)
    lam = density.radial_exponent + 2.0 + integrand.small_power
    tails = density.tail_terms() if exact_tail else ()

    def compute(sp: QuadratureSpec) -> float:
        if d == 0.0:
            c = np.zeros(1)
            cw = np.array([density.angular_mass])
        else:
            v = np.asarray(integrand.vector, dtype=float) / d
            brk = [0.0, 1.0]
            if b is not None:
                # tangency to a coordinate plane, and passage through an axis
                brk += [math.sqrt(max(1.0 - vi * vi, 0.0)) for vi in v]
                brk += [abs(vi) for vi in v]
            c, w = _c_grid(brk, sp)
            if b is None:
                nu = np.full(c.size, 2 * math.pi)
            else:
                nu = zonal_pushforward(b, v, c, sp.panel_order)
            cw = 2.0 * w * nu
        a = c * d
        r, wr = spectral_radial_rule(sp, lam, integrand.max_frequency, cutoff)
        phi = np.empty(a.size)
        rad = density.radial(r) * r * r * wr
        if integrand.factor is not None:
            rad = rad * integrand.factor(r)
        block = max(1, 2_000_000 // r.size)
        for start in range(0, a.size, block):
            aa = a[start:start + block]
            vals = integrand.evaluate(r[None, :], aa[:, None])
            phi[start:start + block] = pairwise_sum(vals * rad[None, :], axis=1)
        for term in integrand.terms if exact_tail else ():
            for dc, dp in tails:
                freq = term.freq + term.shift * a
                phi += term.coef * dc * power_cos_tail(term.power + dp + 2.0, freq,
                                                       term.phase, cutoff)
        return pairwise_sum(cw * phi)

    return certify(compute, spec, what="zonal spectral integral")


# ---------------------------------------------------------------------------
# sphere products


def integrate_sphere_product(g: Callable, T: float, s_power: int, spec: QuadratureSpec, *,
                             zonal: bool = False,
                             angle_breaks: Optional[Callable[[float], Sequence[float]]] = None,
                             s_breaks: Sequence[float] = ()) -> Integral:
    """Certified ``int_0^T int_{S^2} int_{S^2} g(s, xi, eta) s**p dsigma dsigma ds``.

    Parameters
    ----------
    g : callable
        ``g(s, xi, eta)`` with ``s`` of shape ``(N,)`` and ``xi``, ``eta`` of
        shape ``(N, 3)``; returns ``(N,)``.
    s_power : {1, 2}
    zonal : bool
        Declare that ``g`` depends on ``(xi, eta)`` only through ``xi . eta``.
        Then ``xi`` is fixed at the north pole and ``eta`` is integrated in
        its polar angle only.
    angle_breaks : callable, optional
        ``angle_breaks(s)`` returns interior breakpoints (kinks) in the angle
        ``theta`` between ``eta`` and ``-xi``; zonal route only.
    s_breaks : sequence of float
        Interior breakpoints in ``s`` (e.g. the scale of a small shift);
        each panel is graded toward its left end.

    Notes
    -----
    ``eta`` is parametrised by its angle from ``-xi``, where integrands built
    from ``xi + eta`` are singular; that angle is graded toward 0.
    """
    if s_power not in (1, 2):
        raise ValueError("s_power must be 1 or 2")
    if not T > 0:
        raise ValueError("T must be positive")

    s_pts = [0.0] + sorted(float(b) for b in s_breaks if 0.0 < b < T) + [float(T)]

    def s_rule(sp):
        n = max(sp.panel_order // 2, 4)
        parts = [graded_rule(lo, hi, sp.layers // 2, "left", n)
                 for lo, hi in zip(s_pts[:-1], s_pts[1:])]
        return np.concatenate([x for x, _ in parts]), np.concatenate([w for _, w in parts])

    def theta_rule(sp, interior=()):
        n = max(sp.panel_order // 2, 4)
        L = sp.layers // 2
        pts = [0.0] + sorted(t for t in interior if 0.0 < t < math.pi) + [math.pi]
        nodes, weights = [], []
        for i, (lo, hi) in enumerate(zip(pts[:-1], pts[1:])):
            side = "left" if (i == 0 and len(pts) == 2) else "both"
            x, w = graded_rule(lo, hi, L, side, n)
            nodes.append(x)
            weights.append(w)
        return np.concatenate(nodes), np.concatenate(weights)

    north = np.array([0.0, 0.0, 1.0])

    def compute_zonal(sp: QuadratureSpec) -> float:
        s, ws = s_rule(sp)
        vals = np.empty(s.size)
        for i, si in enumerate(s):
            extra = angle_breaks(si) if angle_breaks is not None else ()
            th, wt = theta_rule(sp, extra)
            eta = np.stack([np.sin(th), np.zeros_like(th), -np.cos(th)], axis=1)
            xi = np.broadcast_to(north, eta.shape)
            gv = np.asarray(g(np.full(th.size, si), xi, eta), dtype=float)
            vals[i] = pairwise_sum(gv * np.sin(th) * wt)
        return 8 * math.pi ** 2 * pairwise_sum(vals * ws * s ** s_power)

    def compute_full(sp: QuadratureSpec) -> float:
        s, ws = s_rule(sp)
        rule = lebedev_sphere(max(sp.sphere_nodes // 4, 6))
        th, wt = theta_rule(sp)
        nphi = 2 * max(sp.panel_order // 2, 4)
        ph = 2 * math.pi * np.arange(nphi) / nphi
        wph = 2 * math.pi / nphi
        T_, P_ = np.meshgrid(th, ph, indexing="ij")
        wang = (np.sin(T_) * wt[:, None] * wph).ravel()
        per_xi = np.empty(rule.order)
        sw = ws * s ** s_power
        for m, xi in enumerate(rule.nodes):
            e1, e2 = _frame(xi)
            eta = (-np.cos(T_)[..., None] * xi + np.sin(T_)[..., None]
                   * (np.cos(P_)[..., None] * e1 + np.sin(P_)[..., None] * e2)).reshape(-1, 3)
            ss = np.repeat(s, eta.shape[0])
            ee = np.tile(eta, (s.size, 1))
            xx = np.broadcast_to(xi, ee.shape)
            gv = np.asarray(g(ss, xx, ee), dtype=float).reshape(s.size, -1)
            per_xi[m] = pairwise_sum(sw * pairwise_sum(gv * wang[None, :], axis=1))
        return pairwise_sum(per_xi * rule.weights)

    return certify(compute_zonal if zonal else compute_full, spec, what="sphere product integral")


# ---------------------------------------------------------------------------
# half-line


def integrate_halfline(g: Callable[[np.ndarray], np.ndarray], spec: QuadratureSpec) -> Integral:
    """Certified ``int_0^inf g(w) dw`` through ``w = e^u``.

    The ``u`` range is found by scanning ``|g(e^u) e^u|`` on ``[-700, 700]``
    and keeping the region above ``1e-18`` of its maximum (plus a margin).

    Raises
    ------
    QuadratureError
        If the envelope has not decayed at either end of the scan.
    """
    scan = np.linspace(-700.0, 700.0, 5601)
    with np.errstate(all="ignore"):
        env = np.abs(np.asarray(g(np.exp(scan)), dtype=float) * np.exp(scan))
    env = np.where(np.isfinite(env), env, 0.0)
    peak = env.max()
    if peak == 0.0:
        return certify(lambda sp: 0.0, spec, what="half-line integral")
    keep = np.nonzero(env >= 1e-18 * peak)[0]
    if keep[0] == 0 or keep[-1] == scan.size - 1:
        raise QuadratureError("half-line integral: integrand does not decay within the scan range")
    lo = scan[max(keep[0] - 2, 0)]
    hi = scan[min(keep[-1] + 2, scan.size - 1)]

    def compute(sp: QuadratureSpec) -> float:
        npan = int(math.ceil((hi - lo) / 0.5))
        u, wu = composite_rule(np.linspace(lo, hi, npan + 1), sp.panel_order)
        w = np.exp(u)
        return pairwise_sum(wu * w * np.asarray(g(w), dtype=float))

    return certify(compute, spec, what="half-line integral")
