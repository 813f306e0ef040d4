"""Spectral Monte Carlo sampler for the linear additive-noise solution.

The solution ``u(t, x) = int_0^t int G(t - s, x - y) W(ds, dy)`` is a centred
Gaussian field with covariance

    E u(t, x) u(t', x') = int Sigma_{t t'}(|xi|) cos(xi . (x - x')) mu(dxi),

    Sigma_{t t'}(r) = int_0^{min(t, t')} sin((t - s) r) sin((t' - s) r) / r^2 ds.

Replacing ``mu`` by a finite sum of point masses ``w_k delta_{xi_k}`` (one
representative per pair ``+-xi_k``) gives the exact-in-law synthesis

    u(t_j, x) = sum_k sqrt(w_k) [cos(xi_k . x) A_k(t_j) + sin(xi_k . x) B_k(t_j)],

where ``A_k`` and ``B_k`` are independent Gaussian vectors over the time grid
with covariance ``Sigma(|xi_k|)``.  There is no time-stepping bias; the only
approximation is the truncation of ``mu``.

Mode sets use a logarithmic radial grid with cell-integrated radial mass and
an angular rule: Lebedev for isotropic densities and the octant Gauss-Jacobi
rule for the axis-singular fractional density, whose nodes avoid the
coordinate planes and whose weights carry the angular singularity exactly.

Randomness comes from :class:`numpy.random.Philox` keyed by the seed, with the
realization index in the top counter word, so every realization has its own
substream and results do not depend on how realizations are scheduled.
"""

from __future__ import annotations

import io
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .kernels import KernelSpec
from .quadrature import (
    gauss_jacobi,
    gauss_legendre,
    lebedev_sphere,
    octant_jacobi_rule,
    pairwise_sum,
)
from .regularity import ExponentFit, fit_exponent
from .wavekernel import as_point

__all__ = [
    "ModeSet",
    "FieldSample",
    "VariogramCurve",
    "build_mode_set",
    "mode_time_covariance",
    "mode_time_covariances",
    "simulate_field",
    "truncated_covariance",
    "truncated_variance",
    "truncated_variogram",
    "empirical_variogram",
    "estimate_holder",
    "gaussianity",
    "dyadic_lag_points",
]

#: Captured mass below this value is reported as a warning.
CAPTURED_MASS_WARNING = 0.9
#: Negative eigenvalues of a time covariance above ``-PSD_JITTER * scale`` are clipped.
PSD_JITTER = 1e-12
_SMALL_RT = 0.25
_RADIAL_GAUSS = 16

_BINARY_MAGIC = b"WLFS0001"


# ---------------------------------------------------------------------------
# mode sets


@dataclass(frozen=True)
class ModeSet:
    """Point-mass discretisation of the spectral measure.

    Attributes
    ----------
    frequencies : ndarray, shape (K, 3)
        One representative ``xi_k`` per pair ``+-xi_k``.
    weights : ndarray, shape (K,)
        Mass of the pair (both halves), so ``sum_k w_k g(xi_k)`` approximates
        ``int g dmu`` for even ``g``.
    cutoff : float
        Spectral cutoff ``Lambda``.
    grid : dict
        Descriptor of the construction.
    captured_mass : float
        ``sum_k w_k / (1 + |xi_k|^2)`` divided by the full integral.
    warning : str or None
        Set when the captured mass is below :data:`CAPTURED_MASS_WARNING`.
    """

    frequencies: np.ndarray
    weights: np.ndarray
    cutoff: float
    grid: dict
    captured_mass: float
    warning: Optional[str] = None

    def __post_init__(self):
        xi = np.asarray(self.frequencies, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if xi.ndim != 2 or xi.shape[1] != 3 or w.shape != (xi.shape[0],):
            raise ValueError("frequencies must be (K, 3) with K weights")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("mode weights must be finite and nonnegative")
        if not 0.0 < self.captured_mass <= 1.0 + 1e-9:
            raise ValueError("captured mass must lie in (0, 1]")
        for a in (xi, w):
            a.flags.writeable = False
        object.__setattr__(self, "frequencies", xi)
        object.__setattr__(self, "weights", w)

    @property
    def mode_count(self) -> int:
        return int(self.weights.size)

    @property
    def radii(self) -> np.ndarray:
        return np.linalg.norm(self.frequencies, axis=1)

    @property
    def total_weight(self) -> float:
        return float(pairwise_sum(self.weights))

    def as_dict(self) -> dict:
        return {"mode_count": self.mode_count, "cutoff": self.cutoff, "grid": dict(self.grid),
                "captured_mass": self.captured_mass, "total_weight": self.total_weight,
                "warning": self.warning}


def _radial_rule(density, inner: float, cutoff: float, n_cells: int, per_cell: int):
    """Radial nodes and masses for ``int g(r) radial(r) r^2 dr`` on ``[0, cutoff]``.

    The first cell ``[0, inner]`` uses a Gauss-Jacobi rule whose weight
    carries the power ``r^(e + 2)`` of the density at the origin, so the
    singular part is integrated exactly.  The other ``n_cells - 1`` cells are
    log-spaced on ``[inner, cutoff]`` with Gauss-Legendre nodes in ``log r``.
    """
    e = density.radial_exponent
    x, w = gauss_jacobi(per_cell, 0.0, e + 2.0)
    r0 = 0.5 * inner * (1.0 + np.asarray(x))
    m0 = (0.5 * inner) ** (e + 3.0) * np.asarray(w) * density.radial(r0) / r0 ** e
    edges = np.geomspace(inner, cutoff, n_cells)
    lo, hi = np.log(edges[:-1])[:, None], np.log(edges[1:])[:, None]
    y, v = gauss_legendre(per_cell)
    r = np.exp(0.5 * (lo + hi) + 0.5 * (hi - lo) * y[None, :])
    m = 0.5 * (hi - lo) * v[None, :] * r ** 3 * density.radial(r)
    return (np.concatenate([r0, r.ravel()]), np.concatenate([m0, m.ravel()]),
            np.concatenate([[0.0], edges]))


def _half_sphere(nodes: np.ndarray, weights: np.ndarray):
    """Keep one node of each antipodal pair and double its weight."""
    eps = 1e-12
    first = np.where(np.abs(nodes[:, 0]) > eps, nodes[:, 0],
                     np.where(np.abs(nodes[:, 1]) > eps, nodes[:, 1], nodes[:, 2]))
    keep = first > 0
    if 2 * int(keep.sum()) != nodes.shape[0]:
        raise ValueError("angular rule is not centrally symmetric")
    return nodes[keep], 2.0 * weights[keep]


def build_mode_set(kernel: KernelSpec, cutoff: float, resolution: int = 16, scheme: str = "auto",
                   angular_nodes: int = 128, nodes_per_cell: int = 4,
                   inner_radius: float = 0.25) -> ModeSet:
    """Discretise the spectral measure of ``kernel`` inside ``|xi| <= cutoff``.

    Parameters
    ----------
    kernel : KernelSpec
    cutoff : float
        Spectral cutoff ``Lambda > 0``.
    resolution : int
        Number of radial cells (at least 8).  The innermost cell is
        ``[0, inner_radius]``; the others are log-spaced up to the cutoff.
    scheme : {"auto", "lebedev", "jacobi"}
        Angular rule; "auto" picks Jacobi for axis-singular densities.
    angular_nodes : int
        Minimum number of directions on the full sphere (half of them are
        kept, one per antipodal pair).
    nodes_per_cell : int
        Gauss nodes per radial cell.
    inner_radius : float
        Outer edge of the innermost cell.

    Returns
    -------
    ModeSet
        ``resolution * nodes_per_cell * directions`` modes, where
        ``directions`` is half the size of the angular rule.
    """
    if not cutoff > 0:
        raise ValueError("cutoff must be positive")
    if int(resolution) < 8:
        raise ValueError("resolution must be at least 8")
    resolution = int(resolution)
    dens = kernel.density
    if scheme == "auto":
        scheme = "jacobi" if dens.axis_singular else "lebedev"
    if scheme == "lebedev":
        if dens.axis_singular:
            raise ValueError("the Lebedev scheme cannot resolve an axis-singular density")
        rule = lebedev_sphere(int(angular_nodes))
        nodes, aw = np.asarray(rule.nodes), np.asarray(rule.weights)
    elif scheme == "jacobi":
        exps = dens.angular_exponents or (0.0, 0.0, 0.0)
        n = max(2, int(math.ceil(math.sqrt(angular_nodes / 8.0))))
        rule = octant_jacobi_rule(tuple(float(b) for b in exps), n)
        nodes, aw = np.asarray(rule.nodes), np.asarray(rule.weights)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    nodes, aw = _half_sphere(nodes, aw)
    if not 0 < inner_radius < cutoff:
        raise ValueError("need 0 < inner_radius < cutoff")
    if int(nodes_per_cell) < 1:
        raise ValueError("nodes_per_cell must be positive")
    radius, mass, edges = _radial_rule(dens, float(inner_radius), float(cutoff), resolution,
                                       int(nodes_per_cell))
    xi = (radius[:, None, None] * nodes[None, :, :]).reshape(-1, 3)
    w = (mass[:, None] * aw[None, :]).ravel()

    captured, note = 1.0, None
    cert = dens.h2_certificate
    if cert is not None:
        captured = float(pairwise_sum(w / (1.0 + np.einsum("ij,ij->i", xi, xi)))) / cert.value
        captured = min(captured, 1.0)
        if captured < CAPTURED_MASS_WARNING:
            note = f"captured mass {captured:.3f} is below {CAPTURED_MASS_WARNING}; raise the cutoff"
    grid = {"scheme": scheme, "radial_cells": resolution,
            "nodes_per_cell": int(nodes_per_cell), "inner_radius": float(inner_radius),
            "directions": int(nodes.shape[0]), "radial_edges": [float(x) for x in edges]}
    return ModeSet(xi, w, float(cutoff), grid, captured, note)


# ---------------------------------------------------------------------------
# time covariance


def _sigma_closed(r: np.ndarray, tj: np.ndarray, tl: np.ndarray) -> np.ndarray:
    m = np.minimum(tj, tl)
    d = np.abs(tj - tl)
    return (m * np.cos(d * r) - (np.sin((tj + tl) * r) - np.sin(d * r)) / (2.0 * r)) / (2.0 * r * r)


def _sigma_quadrature(r: np.ndarray, tj: np.ndarray, tl: np.ndarray, n: int = 24) -> np.ndarray:
    x, w = gauss_legendre(n)
    m = np.minimum(tj, tl)[..., None]
    s = 0.5 * m * (1.0 + x)
    rr = r[..., None]
    with np.errstate(invalid="ignore", divide="ignore"):
        a = np.where(rr > 0, np.sin((tj[..., None] - s) * rr) / rr, tj[..., None] - s)
        b = np.where(rr > 0, np.sin((tl[..., None] - s) * rr) / rr, tl[..., None] - s)
    return 0.5 * m[..., 0] * np.sum(w * a * b, axis=-1)


def _check_times(times) -> np.ndarray:
    t = np.asarray(times, dtype=float).ravel()
    if t.size == 0:
        raise ValueError("need at least one time")
    if np.any(t < 0) or np.any(np.diff(t) < 0) or not np.all(np.isfinite(t)):
        raise ValueError("times must be finite, nonnegative and ordered")
    return t


def mode_time_covariances(xi_norm, times) -> np.ndarray:
    """Stack of time covariances ``Sigma(r)`` for an array of radii.

    Returns an array of shape ``r.shape + (n_t, n_t)``.  The closed form

        Sigma_jl = [m cos(d r) - (sin((t_j + t_l) r) - sin(d r)) / (2 r)] / (2 r^2),

    with ``m = min(t_j, t_l)`` and ``d = |t_j - t_l|``, cancels badly when
    ``r t`` is small; there a Gauss-Legendre rule on the smooth ``s``
    integrand is used instead.
    """
    t = _check_times(times)
    r = np.asarray(xi_norm, dtype=float)
    if np.any(r < 0) or not np.all(np.isfinite(r)):
        raise ValueError("frequency norms must be finite and nonnegative")
    tj = np.broadcast_to(t[:, None], (t.size, t.size))
    tl = np.broadcast_to(t[None, :], (t.size, t.size))
    rb = r[..., None, None]
    small = rb * t[-1] < _SMALL_RT
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = _sigma_closed(rb, tj, tl)
    quad = _sigma_quadrature(np.broadcast_to(rb, r.shape + tj.shape), tj, tl) if np.any(small) else 0.0
    out = np.where(small, quad, closed)
    return 0.5 * (out + np.swapaxes(out, -1, -2))


def mode_time_covariance(xi_norm: float, times: Sequence[float]) -> np.ndarray:
    """``Sigma_jl = int_0^{min(t_j, t_l)} sin((t_j-s) r) sin((t_l-s) r) / r^2 ds``.

    Raises
    ------
    ValueError
        The matrix is not positive semidefinite beyond the jitter
        ``PSD_JITTER * max|Sigma|``.
    """
    if not xi_norm > 0:
        raise ValueError("xi_norm must be positive")
    sig = mode_time_covariances(np.asarray(float(xi_norm)), times)
    _psd_factor(sig[None])
    return sig


def _psd_factor(sig: np.ndarray) -> np.ndarray:
    """Factors ``L`` with ``L L^T = Sigma`` for a stack of covariances."""
    n = sig.shape[-1]
    if n == 1:
        if np.any(sig[..., 0, 0] < -PSD_JITTER * np.abs(sig[..., 0, 0]).max(initial=0.0)):
            raise ValueError("time covariance is not positive semidefinite")
        return np.sqrt(np.maximum(sig, 0.0))
    vals, vecs = np.linalg.eigh(sig)
    scale = np.max(np.abs(vals), axis=-1, keepdims=True)
    if np.any(vals < -PSD_JITTER * np.maximum(scale, np.finfo(float).tiny)):
        raise ValueError("time covariance is not positive semidefinite beyond jitter")
    return vecs * np.sqrt(np.maximum(vals, 0.0))[..., None, :]


# ---------------------------------------------------------------------------
# samples


@dataclass(frozen=True)
class FieldSample:
    """Realizations of ``u`` on a time-by-space grid.

    Attributes
    ----------
    times : ndarray, shape (n_t,)
    points : ndarray, shape (n_x, 3)
    realizations : ndarray, shape (n_real, n_t, n_x)
    seed : int
    mode_count : int
    """

    times: np.ndarray
    points: np.ndarray
    realizations: np.ndarray
    seed: int
    mode_count: int

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        x = np.asarray(self.points, dtype=float).reshape(-1, 3)
        v = np.asarray(self.realizations, dtype=float)
        if v.ndim != 3 or v.shape[1:] != (t.size, x.shape[0]):
            raise ValueError("realizations must have shape (n_real, n_times, n_points)")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "points", x)
        object.__setattr__(self, "realizations", v)

    @property
    def n_real(self) -> int:
        return int(self.realizations.shape[0])

    def to_bytes(self) -> bytes:
        """Binary export.

        Layout (little endian): magic ``WLFS0001``; ``uint64`` counts
        ``n_real, n_t, n_x, mode_count``; ``uint64`` seed; ``float64`` times;
        ``float64`` points (row-major, ``n_x * 3``); ``float64`` payload in
        time-major order ``[t][realization][point]``.
        """
        n_real, n_t, n_x = self.realizations.shape
        head = _BINARY_MAGIC + struct.pack("<5Q", n_real, n_t, n_x, self.mode_count,
                                           self.seed & 0xFFFFFFFFFFFFFFFF)
        payload = np.ascontiguousarray(np.transpose(self.realizations, (1, 0, 2)), dtype="<f8")
        return (head + np.asarray(self.times, dtype="<f8").tobytes()
                + np.asarray(self.points, dtype="<f8").tobytes() + payload.tobytes())

    @classmethod
    def from_bytes(cls, data: bytes) -> "FieldSample":
        if data[:8] != _BINARY_MAGIC:
            raise ValueError("not a field sample file")
        n_real, n_t, n_x, modes, seed = struct.unpack("<5Q", data[8:48])
        off = 48
        times = np.frombuffer(data, "<f8", n_t, off).copy()
        off += 8 * n_t
        points = np.frombuffer(data, "<f8", 3 * n_x, off).reshape(n_x, 3).copy()
        off += 24 * n_x
        payload = np.frombuffer(data, "<f8", n_t * n_real * n_x, off).reshape(n_t, n_real, n_x)
        return cls(times, points, np.transpose(payload, (1, 0, 2)).copy(), int(seed), int(modes))

    def to_csv(self) -> str:
        """Long-format CSV ``realization,t,x1,x2,x3,u`` (17 significant digits)."""
        buf = io.StringIO()
        buf.write("realization,t,x1,x2,x3,u\n")
        for k in range(self.n_real):
            for j, t in enumerate(self.times):
                for i, p in enumerate(self.points):
                    buf.write(f"{k},{t:.17g},{p[0]:.17g},{p[1]:.17g},{p[2]:.17g},"
                              f"{self.realizations[k, j, i]:.17g}\n")
        return buf.getvalue()


def _realization_rng(seed: int, index: int) -> np.random.Generator:
    key = int(seed) & 0xFFFFFFFFFFFFFFFF
    counter = np.array([0, 0, 0, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def simulate_field(modes: ModeSet, times, points, n_real: int, seed: int,
                   workers: int = 1, chunk: int = 64) -> FieldSample:
    """Draw ``n_real`` realizations of ``u`` at ``times x points``.

    Parameters
    ----------
    modes : ModeSet
    times : sequence of float
        Ordered, nonnegative.
    points : array_like, shape (n_x, 3)
    n_real : int
        Number of realizations (at least 1).
    seed : int
        Key of the counter-based generator; realization ``k`` uses counter
        word ``k``.
    workers : int
        Thread count; the output does not depend on it.
    chunk : int
        Realizations per work unit.
    """
    if int(n_real) < 1:
        raise ValueError("n_real must be at least 1")
    n_real = int(n_real)
    t = _check_times(times)
    x = np.asarray(points, dtype=float).reshape(-1, 3)
    xi, w = modes.frequencies, modes.weights
    K = xi.shape[0]
    L = _psd_factor(mode_time_covariances(np.linalg.norm(xi, axis=1), t))  # (K, n_t, n_t)
    phase = x @ xi.T  # (n_x, K)
    amp = np.sqrt(w)
    cos_p = np.cos(phase) * amp
    sin_p = np.sin(phase) * amp
    out = np.empty((n_real, t.size, x.shape[0]))

    def draw(start: int) -> None:
        for k in range(start, min(start + chunk, n_real)):
            z = _realization_rng(seed, k).standard_normal((2, K, t.size))
            a = np.einsum("kij,kj->ik", L, z[0])  # (n_t, K)
            b = np.einsum("kij,kj->ik", L, z[1])
            out[k] = a @ cos_p.T + b @ sin_p.T

    starts = range(0, n_real, chunk)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            list(pool.map(draw, starts))
    else:
        for s in starts:
            draw(s)
    return FieldSample(t, x, out, int(seed), K)


# ---------------------------------------------------------------------------
# truncated analytic references


def truncated_covariance(modes: ModeSet, t: float, tbar: float, x, y) -> float:
    """``sum_k w_k cos(xi_k . (x - y)) Sigma_{t tbar}(|xi_k|)``."""
    lo, hi = sorted((float(t), float(tbar)))
    sig = mode_time_covariances(modes.radii, [lo, hi])[:, 0, 1]
    d = as_point(x) - as_point(y)
    return float(pairwise_sum(modes.weights * np.cos(modes.frequencies @ d) * sig))


def truncated_variance(modes: ModeSet, t: float) -> float:
    """``sum_k w_k Sigma_11(|xi_k|)``, the variance of the truncated field."""
    sig = mode_time_covariances(modes.radii, [float(t)])[:, 0, 0]
    return float(pairwise_sum(modes.weights * sig))


# ---------------------------------------------------------------------------
# variograms


@dataclass(frozen=True)
class VariogramCurve:
    """Variogram values ``v(h) = E|u(t, x + h e) - u(t, x)|^2`` along ``e``.

    Attributes
    ----------
    lags : ndarray
        Increasing, positive (a leading zero lag is allowed).
    values : ndarray
        Nonnegative.
    stderr : ndarray or None
        Monte Carlo standard errors; ``None`` for exact curves.
    direction : ndarray
        Unit vector ``e``.
    method : str
        "exact", "truncated" or "mc".
    """

    lags: np.ndarray
    values: np.ndarray
    stderr: Optional[np.ndarray]
    direction: np.ndarray
    method: str

    def __post_init__(self):
        lags = np.asarray(self.lags, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if lags.shape != vals.shape or lags.ndim != 1:
            raise ValueError("lags and values must be 1-D of equal length")
        if np.any(lags < 0) or np.any(np.diff(lags) <= 0):
            raise ValueError("lags must be nonnegative and increasing")
        if np.any(vals < 0):
            raise ValueError("variogram values must be nonnegative")
        object.__setattr__(self, "lags", lags)
        object.__setattr__(self, "values", vals)
        if self.stderr is not None:
            object.__setattr__(self, "stderr", np.asarray(self.stderr, dtype=float))
        object.__setattr__(self, "direction", _unit(self.direction))


def _unit(direction) -> np.ndarray:
    d = as_point(direction)
    n = float(np.linalg.norm(d))
    if n == 0:
        raise ValueError("direction must be nonzero")
    return d / n


def dyadic_lag_points(direction, lags, base_points=None) -> np.ndarray:
    """Point set containing every ``x`` and ``x + h e`` for the given lags.

    ``base_points`` defaults to the origin.
    """
    e = _unit(direction)
    base = np.zeros((1, 3)) if base_points is None else np.asarray(base_points, float).reshape(-1, 3)
    lags = np.asarray(lags, dtype=float)
    pts = [base] + [base + h * e for h in lags if h > 0]
    return np.concatenate(pts, axis=0)


def _locate(points: np.ndarray, target: np.ndarray, tol: float) -> int:
    d = np.max(np.abs(points - target[None, :]), axis=1)
    i = int(np.argmin(d))
    return i if d[i] <= tol else -1


def empirical_variogram(sample: FieldSample, t_index: int, direction, lags,
                        base_points=None, tol: float = 1e-12) -> VariogramCurve:
    """Mean squared increment ``u(t, x + h e) - u(t, x)`` over realizations.

    For each lag the squared increments are first averaged over the base
    points ``x`` within a realization; the estimate is the mean over
    realizations and the standard error is their sample deviation over
    ``sqrt(n_real)``, which stays valid when increments at different base
    points are correlated.

    Parameters
    ----------
    base_points : array_like, optional
        Base points ``x``; the origin by default.

    Raises
    ------
    ValueError
        Some ``x`` or ``x + h e`` is not a sample point (the message lists
        the missing pairs).
    """
    e = _unit(direction)
    lags = np.asarray(lags, dtype=float)
    base = np.zeros((1, 3)) if base_points is None else np.asarray(base_points, float).reshape(-1, 3)
    u = sample.realizations[:, int(t_index), :]
    scale = max(1.0, float(np.max(np.abs(sample.points))))
    missing, pairs = [], []
    for h in lags:
        idx = []
        for x in base:
            i, j = _locate(sample.points, x, tol * scale), _locate(sample.points, x + h * e, tol * scale)
            if i < 0 or j < 0:
                missing.append((tuple(float(c) for c in x), float(h)))
            idx.append((i, j))
        pairs.append(idx)
    if missing:
        listed = ", ".join(f"x={x} h={h:g}" for x, h in missing[:10])
        raise ValueError(f"{len(missing)} grid pairs missing from the sample: {listed}")
    values, errs = [], []
    n = sample.n_real
    for idx in pairs:
        inc = np.stack([(u[:, j] - u[:, i]) ** 2 for i, j in idx], axis=1).mean(axis=1)
        values.append(float(inc.mean()))
        errs.append(float(inc.std(ddof=1) / math.sqrt(n)) if n > 1 else float("nan"))
    return VariogramCurve(lags, np.asarray(values), np.asarray(errs), e, "mc")


def truncated_variogram(modes: ModeSet, t: float, direction, lags) -> VariogramCurve:
    """Exact variogram of the truncated field:
    ``sum_k 2 w_k (1 - cos(h xi_k . e)) Sigma_11(|xi_k|)``."""
    e = _unit(direction)
    lags = np.asarray(lags, dtype=float)
    sig = mode_time_covariances(modes.radii, [float(t)])[:, 0, 0]
    proj = modes.frequencies @ e
    s = np.sin(0.5 * lags[:, None] * proj[None, :])
    vals = pairwise_sum(4.0 * s * s * (modes.weights * sig)[None, :], axis=1)
    return VariogramCurve(lags, vals, None, e, "truncated")


def estimate_holder(curve: VariogramCurve, window: Optional[tuple[float, float]] = None) -> ExponentFit:
    """Fit ``log v`` against ``log h``; the Hölder estimate is ``slope / 2``.

    Zero lags are ignored.  Raises ``ValueError`` for nonpositive values in
    the window.
    """
    mask = curve.lags > 0
    return fit_exponent(curve.lags[mask], curve.values[mask], window)


def gaussianity(sample: FieldSample) -> dict:
    """Skewness and excess kurtosis of the standardized marginals.

    Returns the per-marginal maxima of ``|skew|`` and ``|excess kurtosis|``
    and the pooled values over all standardized marginals.
    """
    v = sample.realizations.reshape(sample.n_real, -1)
    sd = v.std(axis=0, ddof=1)
    keep = sd > 0
    z = (v[:, keep] - v[:, keep].mean(axis=0)) / sd[keep]
    skew = stats.skew(z, axis=0)
    kurt = stats.kurtosis(z, axis=0)
    return {"max_abs_skew": float(np.max(np.abs(skew))),
            "max_abs_excess_kurtosis": float(np.max(np.abs(kurt))),
            "pooled_skew": float(stats.skew(z.ravel())),
            "pooled_excess_kurtosis": float(stats.kurtosis(z.ravel())),
            "marginals": int(z.shape[1])}
