"""Command-line front end.

Commands
--------
``kernels list``   families, parameters and predicted exponents
``check``          one regularity condition on a probe grid
``variogram``      exact and/or Monte Carlo spatial variogram
``simulate``       field samples (binary export plus summary)
``crosscheck``     physical vs spectral double integral over an ``(s, t)`` grid
``moments``        variance, temporal increments and variogram at one point

Options may also come from a flat ``key=value`` file (``--config``); flags
override the file.  Every JSON report embeds the effective configuration, its
SHA-256 hash, the seed and the package versions, and floats are written with
17 significant digits, so rerunning from the embedded configuration
reproduces the report byte for byte.

Exit codes: 0 success, 1 numerical failure (failed verdict, deviation above
tolerance, uncertified quadrature), 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import io
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np
import scipy

from . import __version__
from .kernels import FAMILIES, KernelSpec, make_kernel, predicted_exponents
from .moments import (
    gg_functional_spectral,
    spatial_variogram_exact,
    temporal_increment_variance,
    temporal_Z1,
    temporal_Z2,
    variance,
)
from .quadrature import QuadratureError, QuadratureSpec
from .regularity import CONDITION_IDS, DEFAULT_SLACK, condition_sweep, predicted_holder
from .simulator import (
    VariogramCurve,
    build_mode_set,
    dyadic_lag_points,
    empirical_variogram,
    estimate_holder,
    gaussianity,
    simulate_field,
    truncated_variance,
    truncated_variogram,
)
from .wavekernel import gg_functional_physical, gg_physical_riesz

__all__ = ["RunConfig", "UsageError", "main", "dumps_json", "parse_config_text"]

COMMANDS = ("kernels", "check", "variogram", "simulate", "crosscheck", "moments")
EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2

DEFAULT_CROSSCHECK_GRID = ((1.0, 1.0), (1.5, 1.0), (2.0, 0.5))
_CROSSCHECK_TOL = {"smoothed_riesz": 5e-3}
_DEFAULT_LAGS = tuple(2.0 ** -k for k in range(9, 2, -1))
_MAX_CSV_ROWS = 200_000


class UsageError(ValueError):
    """Invalid command line or configuration (exit code 2)."""


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    """Effective options of one run.

    ``out`` and ``workers`` are excluded from the canonical text and hash:
    they do not affect any reported value.
    """

    command: str
    action: Optional[str] = None
    kernel: Optional[str] = None
    beta: Optional[float] = None
    alpha: Optional[float] = None
    h1: Optional[float] = None
    h2: Optional[float] = None
    h3: Optional[float] = None
    include_constants: bool = True
    T: float = 1.0
    t: Optional[float] = None
    tbar: Optional[float] = None
    x: Optional[tuple[float, ...]] = None
    condition: Optional[str] = None
    probes: Optional[tuple[float, ...]] = None
    slack: float = DEFAULT_SLACK
    direction: tuple[float, ...] = (1.0, 0.0, 0.0)
    lags: Optional[tuple[float, ...]] = None
    times: Optional[tuple[float, ...]] = None
    exact: bool = True
    mc: bool = False
    seed: int = 0
    realizations: int = 2000
    modes: int = 4096
    cutoff: float = 4096.0
    resolution: int = 16
    grid: Optional[tuple[float, ...]] = None
    tolerance: Optional[float] = None
    out: Optional[str] = field(default=None, compare=False)
    workers: int = field(default=1, compare=False)

    _EXCLUDED = ("out", "workers")

    def to_text(self) -> str:
        """Canonical ``key=value`` text (sorted keys, unset options omitted)."""
        lines = []
        for f in sorted(dataclasses.fields(self), key=lambda f: f.name):
            if f.name in self._EXCLUDED:
                continue
            v = getattr(self, f.name)
            if v is None:
                continue
            lines.append(f"{f.name}={_format_value(v)}")
        return "\n".join(lines) + "\n"

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()

    def with_defaults(self) -> "RunConfig":
        """Fill command-dependent defaults."""
        upd: dict[str, Any] = {}
        if self.t is None and self.command in ("variogram", "moments"):
            upd["t"] = self.T
        if self.lags is None and self.command in ("variogram", "simulate"):
            upd["lags"] = _DEFAULT_LAGS
        if self.times is None and self.command == "simulate":
            upd["times"] = (self.T,)
        if self.grid is None and self.command == "crosscheck":
            upd["grid"] = tuple(v for pair in DEFAULT_CROSSCHECK_GRID for v in pair)
        if self.tolerance is None and self.command == "crosscheck" and self.kernel:
            upd["tolerance"] = _CROSSCHECK_TOL.get(_family(self.kernel), 1e-3)
        return dataclasses.replace(self, **upd) if upd else self


def _family(name: str) -> str:
    return str(name).lower().replace("-", "_")


def _format_float(v: float) -> str:
    return format(float(v), ".17g")


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _format_float(v)
    if isinstance(v, (tuple, list)):
        return ",".join(_format_value(x) for x in v)
    return str(v)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


def _parse_floats(text: str) -> tuple[float, ...]:
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"not a list of numbers: {text!r}") from exc


def _coerce(key: str, value: Any) -> Any:
    if key not in _FIELD_TYPES:
        raise UsageError(f"unknown configuration key {key!r}")
    if value is None:
        return None
    typ = str(_FIELD_TYPES[key])
    if not isinstance(value, str):
        return tuple(value) if isinstance(value, list) else value
    try:
        if "bool" in typ:
            return _parse_bool(value)
        if "tuple" in typ:
            return _parse_floats(value)
        if "int" in typ:
            return int(value)
        if "float" in typ:
            return float(value)
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {value!r}") from exc
    return value


def parse_config_text(text: str) -> dict:
    """Parse ``key=value`` lines (``#`` starts a comment)."""
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {n}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        k = k.lstrip("-").replace("-", "_")
        out[k] = _coerce(k, v)
    return out


def config_from_text(text: str) -> RunConfig:
    """Inverse of :meth:`RunConfig.to_text`."""
    values = parse_config_text(text)
    if "command" not in values:
        raise UsageError("configuration has no command")
    return RunConfig(**values)


# ---------------------------------------------------------------------------
# deterministic JSON


def dumps_json(obj: Any, indent: int = 2) -> str:
    """JSON text with sorted keys and floats at 17 significant digits.

    Non-finite floats are written as the strings ``"inf"``, ``"-inf"`` and
    ``"nan"``.
    """
    buf = io.StringIO()
    _emit(obj, buf, 0, indent)
    buf.write("\n")
    return buf.getvalue()


def _emit(obj, buf, level, indent):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            buf.write("{}")
            return
        buf.write("{\n")
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        for i, (k, v) in enumerate(items):
            buf.write(f"{pad}{_json_str(str(k))}: ")
            _emit(v, buf, level + 1, indent)
            buf.write(",\n" if i < len(items) - 1 else "\n")
        buf.write(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            buf.write("[]")
            return
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            buf.write("[" + ", ".join(_scalar(v) for v in seq) + "]")
            return
        buf.write("[\n")
        for i, v in enumerate(seq):
            buf.write(pad)
            _emit(v, buf, level + 1, indent)
            buf.write(",\n" if i < len(seq) - 1 else "\n")
        buf.write(end + "]")
    else:
        buf.write(_scalar(obj))


def _json_str(s: str) -> str:
    import json
    return json.dumps(s)


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if math.isnan(f):
            return '"nan"'
        if math.isinf(f):
            return '"inf"' if f > 0 else '"-inf"'
        return _format_float(f)
    return _json_str(str(v))


def _csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    def cell(v):
        if v is None:
            return ""
        if isinstance(v, (float, np.floating)):
            return _format_float(v)
        return str(v)
    lines = [",".join(header)] + [",".join(cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# helpers


def _kernel(cfg: RunConfig) -> KernelSpec:
    if not cfg.kernel:
        raise UsageError("--kernel is required")
    fam = _family(cfg.kernel)
    names = {"riesz": ("beta",), "smoothed_riesz": ("beta",), "bessel": ("alpha",),
             "fractional": ("h1", "h2", "h3")}
    if fam not in names:
        raise UsageError(f"unknown kernel family {cfg.kernel!r}; choose from {', '.join(FAMILIES)}")
    params = {}
    for n in names[fam]:
        v = getattr(cfg, n)
        if v is None:
            raise UsageError(f"kernel {fam} needs --{n}")
        params[n] = v
    try:
        return make_kernel(fam, include_constants=cfg.include_constants, **params)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _report(cfg: RunConfig, body: dict) -> dict:
    return {
        "command": cfg.command,
        "config": cfg.to_text(),
        "config_hash": cfg.config_hash,
        "seed": cfg.seed,
        "versions": {"wavelab": __version__, "numpy": np.__version__, "scipy": scipy.__version__},
        "result": body,
    }


def _mode_set(kernel: KernelSpec, cfg: RunConfig):
    if cfg.modes < 1 or cfg.realizations < 1:
        raise UsageError("--modes and --realizations must be positive")
    if not cfg.cutoff > 0:
        raise UsageError("--cutoff must be positive")
    per_cell = 4
    directions = max(1, math.ceil(cfg.modes / (cfg.resolution * per_cell)))
    try:
        return build_mode_set(kernel, cfg.cutoff, cfg.resolution, angular_nodes=2 * directions,
                              nodes_per_cell=per_cell)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _check_positive_list(name: str, values, allow_empty: bool = False) -> tuple[float, ...]:
    vals = tuple(values or ())
    if not vals and not allow_empty:
        raise UsageError(f"--{name} must not be empty")
    if any(not (v > 0) for v in vals):
        raise UsageError(f"--{name} values must be positive")
    return vals


def _unit_direction(d) -> tuple[float, ...]:
    if d is None or len(d) != 3:
        raise UsageError("--direction needs three components")
    n = math.sqrt(sum(c * c for c in d))
    if n == 0:
        raise UsageError("--direction must be nonzero")
    return tuple(c / n for c in d)


def _curve_dict(curve: VariogramCurve) -> dict:
    return {"method": curve.method, "lags": curve.lags.tolist(), "values": curve.values.tolist(),
            "stderr": None if curve.stderr is None else curve.stderr.tolist()}


def _fit_dict(curve: VariogramCurve) -> Optional[dict]:
    try:
        fit = estimate_holder(curve)
    except ValueError:
        return None
    d = fit.as_dict()
    d["holder_estimate"] = fit.slope / 2.0
    return d


# ---------------------------------------------------------------------------
# commands


def cmd_kernels(cfg: RunConfig) -> tuple[dict, dict, int]:
    if cfg.action not in (None, "list"):
        raise UsageError("usage: kernels list")
    params = {"riesz": ["beta in (0, 2)"], "bessel": ["alpha > 1"],
              "fractional": ["h1, h2, h3 in (1/2, 1)"], "smoothed_riesz": ["beta in (0, 3)"]}
    body: dict = {"families": [{"family": f, "parameters": params[f]} for f in FAMILIES]}
    if cfg.kernel:
        k = _kernel(cfg)
        body["kernel"] = k.as_dict()
        body["predicted_exponents"] = predicted_exponents(k).as_dict()
        body["predicted_holder"] = predicted_holder(k).as_dict()
    return body, {}, EXIT_OK


def cmd_check(cfg: RunConfig) -> tuple[dict, dict, int]:
    k = _kernel(cfg)
    if not cfg.condition:
        raise UsageError("--condition is required")
    cid = cfg.condition.upper()
    if cid not in CONDITION_IDS:
        raise UsageError(f"unknown condition {cfg.condition!r}; choose from {', '.join(CONDITION_IDS)}")
    probes = None
    if cfg.probes is not None:
        probes = _check_positive_list("probes", cfg.probes)
        if len(set(probes)) != len(probes):
            raise UsageError("--probes must be distinct")
    try:
        report = condition_sweep(k, cid, cfg.T, probes, direction=_unit_direction(cfg.direction),
                                 slack=cfg.slack)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = [(h, v, d) for h, v, d in zip(report.probe_grid, report.integral_values,
                                         report.deltas or [None] * len(report.integral_values))]
    csv = _csv(("probe", "value", "delta"), rows)
    code = EXIT_NUMERICAL if report.verdict == "fail" else EXIT_OK
    return report.as_dict(), {"check.csv": csv}, code


def cmd_variogram(cfg: RunConfig) -> tuple[dict, dict, int]:
    k = _kernel(cfg)
    lags = _check_positive_list("lags", cfg.lags)
    if list(lags) != sorted(set(lags)):
        raise UsageError("--lags must be strictly increasing")
    e = _unit_direction(cfg.direction)
    t = float(cfg.t)
    if t < 0:
        raise UsageError("--t must be nonnegative")
    body: dict = {"kernel": k.as_dict(), "t": t, "direction": list(e), "kappa_bar": k.kappa_bar}
    rows = []
    if k.kappa_bar is not None:
        body["two_kappa_bar"] = 2.0 * k.kappa_bar
    if cfg.exact:
        vals, certs = [], []
        for h in lags:
            r = spatial_variogram_exact(k, t, tuple(h * c for c in e))
            vals.append(r.value)
            certs.append(r.certificate.as_dict())
        curve = VariogramCurve(np.asarray(lags), np.maximum(vals, 0.0), None, e, "exact")
        body["exact"] = _curve_dict(curve)
        body["exact"]["certificates"] = certs
        body["exact"]["fit"] = _fit_dict(curve)
        rows += [("exact", h, v, None) for h, v in zip(lags, curve.values)]
    if cfg.mc:
        ms = _mode_set(k, cfg)
        sample = simulate_field(ms, [t], dyadic_lag_points(e, lags), cfg.realizations, cfg.seed,
                                workers=cfg.workers)
        mc = empirical_variogram(sample, 0, e, lags)
        ref = truncated_variogram(ms, t, e, lags)
        body["mode_set"] = ms.as_dict()
        body["mc"] = _curve_dict(mc)
        body["mc"]["fit"] = _fit_dict(mc)
        body["truncated"] = _curve_dict(ref)
        body["truncated"]["fit"] = _fit_dict(ref)
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(mc.stderr > 0, (mc.values - ref.values) / mc.stderr, 0.0)
        body["mc"]["z_scores"] = z.tolist()
        body["mc"]["within_3_stderr"] = int(np.sum(np.abs(z) <= 3.0))
        rows += [("mc", h, v, s) for h, v, s in zip(lags, mc.values, mc.stderr)]
        rows += [("truncated", h, v, None) for h, v in zip(lags, ref.values)]
    if not (cfg.exact or cfg.mc):
        raise UsageError("nothing to compute: enable the exact or the Monte Carlo curve")
    return body, {"variogram.csv": _csv(("method", "lag", "value", "stderr"), rows)}, EXIT_OK


def _points(cfg: RunConfig, e) -> np.ndarray:
    if cfg.x is not None:
        if len(cfg.x) % 3:
            raise UsageError("--x needs a multiple of three coordinates")
        return np.asarray(cfg.x, dtype=float).reshape(-1, 3)
    return dyadic_lag_points(e, _check_positive_list("lags", cfg.lags))


def cmd_simulate(cfg: RunConfig) -> tuple[dict, dict, int]:
    k = _kernel(cfg)
    e = _unit_direction(cfg.direction)
    times = tuple(cfg.times)
    if not times or any(t < 0 for t in times) or list(times) != sorted(times):
        raise UsageError("--times must be nonnegative and ordered")
    pts = _points(cfg, e)
    ms = _mode_set(k, cfg)
    sample = simulate_field(ms, times, pts, cfg.realizations, cfg.seed, workers=cfg.workers)
    real = sample.realizations
    body = {
        "kernel": k.as_dict(),
        "mode_set": ms.as_dict(),
        "times": list(times),
        "points": pts.tolist(),
        "realizations": sample.n_real,
        "sample_mean": real.mean(axis=0).tolist(),
        "sample_variance": real.var(axis=0, ddof=1).tolist() if sample.n_real > 1 else None,
        "truncated_variance": [truncated_variance(ms, t) for t in times],
        "gaussianity": gaussianity(sample) if sample.n_real > 2 else None,
        "sample_sha256": hashlib.sha256(sample.to_bytes()).hexdigest(),
    }
    files: dict = {"sample.bin": sample.to_bytes()}
    if real.size <= _MAX_CSV_ROWS:
        files["sample.csv"] = sample.to_csv()
    return body, files, EXIT_OK


def cmd_crosscheck(cfg: RunConfig) -> tuple[dict, dict, int]:
    k = _kernel(cfg)
    if not k.include_constants:
        raise UsageError("crosscheck needs the normalisation constants: without them f and "
                         "the density are not a Fourier pair")
    g = tuple(cfg.grid)
    if not g or len(g) % 2:
        raise UsageError("--grid needs s:t pairs")
    pairs = [(g[i], g[i + 1]) for i in range(0, len(g), 2)]
    if any(not (s > 0 and t > 0) for s, t in pairs):
        raise UsageError("--grid times must be positive")
    tol = float(cfg.tolerance)
    rows, entries = [], []
    for s, t in pairs:
        if k.family == "riesz":
            phys = gg_physical_riesz(k.params[0], s, t)
            phys_cert = None
        else:
            pi = gg_functional_physical(k, s, t)
            phys, phys_cert = pi.value, pi.certificate.as_dict()
        sp = gg_functional_spectral(k, s, t)
        dev = abs(sp.value - phys) / abs(phys)
        entries.append({"s": s, "t": t, "physical": phys, "spectral": sp.value,
                        "relative_deviation": dev, "physical_certificate": phys_cert,
                        "spectral_certificate": sp.certificate.as_dict()})
        rows.append((s, t, phys, sp.value, dev))
    max_dev = max(e["relative_deviation"] for e in entries)
    body = {"kernel": k.as_dict(), "tolerance": tol, "max_relative_deviation": max_dev,
            "passed": max_dev <= tol, "points": entries}
    csv = _csv(("s", "t", "physical", "spectral", "relative_deviation"), rows)
    return body, {"crosscheck.csv": csv}, EXIT_OK if max_dev <= tol else EXIT_NUMERICAL


def cmd_moments(cfg: RunConfig) -> tuple[dict, dict, int]:
    k = _kernel(cfg)
    t = float(cfg.t)
    if t < 0:
        raise UsageError("--t must be nonnegative")
    res: dict = {}
    v = variance(k, t)
    res["variance"] = {"value": v.value, "certificate": v.certificate.as_dict()}
    if cfg.tbar is not None:
        if cfg.tbar < t:
            raise UsageError("--tbar must be at least --t")
        for name, fn in (("Z1", temporal_Z1), ("Z2", temporal_Z2),
                         ("increment_variance", temporal_increment_variance)):
            r = fn(k, t, cfg.tbar)
            res[name] = {"value": r.value, "certificate": r.certificate.as_dict()}
    if cfg.x is not None:
        if len(cfg.x) != 3:
            raise UsageError("--x needs three coordinates")
        r = spatial_variogram_exact(k, t, cfg.x)
        res["spatial_variogram"] = {"x": list(cfg.x), "value": r.value,
                                    "certificate": r.certificate.as_dict()}
    body = {"kernel": k.as_dict(), "t": t, "tbar": cfg.tbar, "moments": res}
    rows = [(name, d["value"]) for name, d in sorted(res.items())]
    return body, {"moments.csv": _csv(("quantity", "value"), rows)}, EXIT_OK


_HANDLERS = {"kernels": cmd_kernels, "check": cmd_check, "variogram": cmd_variogram,
             "simulate": cmd_simulate, "crosscheck": cmd_crosscheck, "moments": cmd_moments}


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p: argparse.ArgumentParser) -> None:
    s = argparse.SUPPRESS
    p.add_argument("--config", default=s, help="key=value file; flags override it")
    p.add_argument("--kernel", default=s, help=f"kernel family ({', '.join(FAMILIES)})")
    for name in ("beta", "alpha", "h1", "h2", "h3"):
        p.add_argument(f"--{name}", type=float, default=s)
    p.add_argument("--no-constants", dest="include_constants", action="store_false", default=s,
                   help="drop normalisation constants from f and the density")
    p.add_argument("--T", type=float, default=s, help="time horizon (default 1)")
    p.add_argument("--t", type=float, default=s, help="evaluation time (default T)")
    p.add_argument("--tbar", type=float, default=s, help="second time for temporal moments")
    p.add_argument("--x", default=s, help="point(s) x1,x2,x3[;...]")
    p.add_argument("--condition", default=s, help=f"one of {', '.join(CONDITION_IDS)}")
    p.add_argument("--probes", default=s, help="comma-separated probe values")
    p.add_argument("--slack", type=float, default=s)
    p.add_argument("--direction", default=s, help="d1,d2,d3")
    p.add_argument("--lags", default=s, help="comma-separated increasing lags")
    p.add_argument("--times", default=s, help="comma-separated ordered times")
    p.add_argument("--mc", action="store_true", default=s, help="add the Monte Carlo curve")
    p.add_argument("--no-exact", dest="exact", action="store_false", default=s,
                   help="skip the exact curve")
    p.add_argument("--seed", type=int, default=s)
    p.add_argument("--realizations", type=int, default=s)
    p.add_argument("--modes", type=int, default=s, help="target number of spectral modes")
    p.add_argument("--cutoff", type=float, default=s, help="spectral cutoff")
    p.add_argument("--resolution", type=int, default=s, help="radial cells of the mode set")
    p.add_argument("--grid", default=s, help="crosscheck pairs s:t,s:t,...")
    p.add_argument("--tolerance", type=float, default=s)
    p.add_argument("--workers", type=int, default=s)
    p.add_argument("--out", default=s, help="output directory (JSON to stdout otherwise)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wavelab", description="Stochastic wave equation numerical lab.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, help=(_HANDLERS[name].__doc__ or "").strip() or None)
        if name == "kernels":
            p.add_argument("action", nargs="?", default="list", choices=["list"])
        _add_common(p)
    return parser


def config_from_args(argv: Sequence[str]) -> RunConfig:
    ns = vars(build_parser().parse_args(list(argv)))
    command = ns.pop("command", None)
    if command is None:
        raise UsageError("missing command; choose from " + ", ".join(COMMANDS))
    values: dict = {}
    path = ns.pop("config", None)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                values.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        if values.pop("command", command) != command:
            raise UsageError("config file is for a different command")
    for k, v in ns.items():
        if k == "grid" and isinstance(v, str):
            v = v.replace(":", ",")
        values[k] = _coerce(k, v)
    try:
        cfg = RunConfig(command=command, **values)
    except TypeError as exc:
        raise UsageError(str(exc)) from exc
    return cfg.with_defaults()


def run(cfg: RunConfig) -> tuple[dict, dict, int]:
    """Execute a configuration; returns ``(report, files, exit_code)``."""
    body, files, code = _HANDLERS[cfg.command](cfg)
    return _report(cfg, body), files, code


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = config_from_args(argv)
        report, files, code = run(cfg)
    except UsageError as exc:
        print(f"wavelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as exc:
        print(f"wavelab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    text = dumps_json(report)
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        files = dict(files)
        files[f"{cfg.command}.json"] = text
        files["config.txt"] = cfg.to_text()
        for name, data in sorted(files.items()):
            mode = "wb" if isinstance(data, bytes) else "w"
            with open(os.path.join(cfg.out, name), mode, **({} if mode == "wb" else {"newline": ""})) as fh:
                fh.write(data)
    sys.stdout.write(text)
    return code
