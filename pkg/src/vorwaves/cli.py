"""Command-line front end: one run file in, JSON report and CSVs out.

Every subcommand reads the same flat config format
(:mod:`vorwaves.config`), runs the matching module, and writes
``report.json`` in the output directory; the data-heavy commands add
plain CSV files (``profile.csv``, ``surface.csv``, ``field.csv``,
``residuals.csv``) so plotting stays external.  Reports are
deterministic: the same config and version produce byte-identical JSON
apart from the ``timing_seconds`` field.

Exit codes: 0 success, 2 configuration or usage error, 3 numerical
failure.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
import sys
import time
import warnings

import click
import numpy as np

from . import __version__
from . import bernoulli, bounds, dispersion, hodograph, linearwave, stream
from .config import RunConfig
from .errors import ConfigError, DomainError, NoStreamError, VorwavesError

__all__ = ["main", "scale_to_nondimensional"]

_LENGTH_EXP = 1.0 / 3.0


def scale_to_nondimensional(Q: float, g: float, quantity: str, value: float,
                            inverse: bool = False):
    """Convert between dimensional and scaled units.

    Lengths are divided by ``(Q^2 / g)^(1/3)``, velocities by
    ``(Q g)^(1/3)`` and flux-type values (stream function, flow rate) by
    ``Q``; ``inverse=True`` multiplies instead, mapping scaled numbers
    back to dimensional ones.
    """
    if not (Q > 0.0 and g > 0.0):
        raise DomainError(f"scales need Q > 0 and g > 0, got Q={Q!r}, g={g!r}")
    if quantity == "length":
        factor = (Q * Q / g) ** _LENGTH_EXP
    elif quantity == "velocity":
        factor = (Q * g) ** _LENGTH_EXP
    elif quantity == "value":
        factor = Q
    else:
        raise ConfigError(
            f"unknown quantity {quantity!r}; expected length, velocity or "
            f"value")
    return value * factor if inverse else value / factor


# -- report plumbing -------------------------------------------------------


def _jsonify(obj):
    """Reduce module records to plain JSON values; inf and nan to strings."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _jsonify(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _write_csv(out: str, name: str, header, rows) -> str:
    path = os.path.join(out, name)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) for v in row])
    return name


def _surface_from_csv(path: str) -> np.ndarray:
    """Surface samples from a CSV: last column, header row optional."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read surface file {path!r}: {exc}") from exc
    values = []
    for row in rows:
        if not row:
            continue
        try:
            values.append(float(row[-1]))
        except ValueError:
            if values:
                raise ConfigError(
                    f"non-numeric row {row!r} in surface file {path!r}")
            # header row
    if not values:
        raise ConfigError(f"no surface samples in {path!r}")
    return np.asarray(values)


def _execute(name: str, config_path: str, out_dir, tol, worker) -> None:
    started = time.perf_counter()
    saved_tol = os.environ.get("TOOL_SEED_TOLERANCE")
    try:
        cfg = RunConfig.load(config_path, command=name)
        if tol is not None:
            if tol <= 0.0:
                raise ConfigError(f"--tol must be positive, got {tol!r}")
            cfg.tolerance = tol
        if cfg.tolerance is not None:
            os.environ["TOOL_SEED_TOLERANCE"] = repr(cfg.tolerance)
        out = out_dir or cfg.out_dir or "."
        os.makedirs(out, exist_ok=True)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            results, files = worker(cfg, out)
        report = {
            "toolkit": {"name": "vorwaves", "version": __version__},
            "command": name,
            "config": cfg.echo(),
            "results": _jsonify(results),
            "warnings": [str(w.message) for w in caught],
            "files": sorted(files),
            "timing_seconds": round(time.perf_counter() - started, 6),
        }
        path = os.path.join(out, "report.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, sort_keys=True, indent=2)
            fh.write("\n")
        click.echo(f"report written to {path}")
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except VorwavesError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    finally:
        if saved_tol is None:
            os.environ.pop("TOOL_SEED_TOLERANCE", None)
        else:
            os.environ["TOOL_SEED_TOLERANCE"] = saved_tol


def _run_options(fn):
    fn = click.option("--tol", type=float, default=None,
                      help="Override the quadrature tolerance.")(fn)
    fn = click.option("--out", "out_dir", default=None,
                      type=click.Path(file_okay=False),
                      help="Output directory (defaults to [run] out).")(fn)
    fn = click.option("--config", "config_path", required=True,
                      type=click.Path(exists=True, dir_okay=False),
                      help="Run configuration file.")(fn)
    return fn


# -- shared pieces ----------------------------------------------------------


def _stream_for(cfg: RunConfig, dist) -> stream.StreamSolution:
    """The stream named by the config: ``s`` directly, else the
    subcritical branch at head ``r``."""
    s = cfg.get_float("s")
    if s is not None:
        return stream.solve_stream(dist, s)
    r = cfg.get_float("r")
    if r is None:
        raise ConfigError("missing required parameter: give 's' or 'r'")
    pair = bernoulli.conjugates(dist, r)
    if pair.s_plus is None:
        raise NoStreamError(
            f"no subcritical stream at r={r!r} (regime {pair.regime!r}); "
            f"pass 's' explicitly to use another branch")
    return stream.solve_stream(dist, pair.s_plus)


def _built_wave(cfg: RunConfig, dist):
    st = _stream_for(cfg, dist)
    disp = dispersion.find_tau0(st,
                                tau_max=cfg.get_float("tau_max", 50.0),
                                k_multiples=cfg.get_int("K", 10))
    t = cfg.require_float("t")
    wf = linearwave.build_wave(st, disp, t,
                               n_x=cfg.get_int("n_x", 129),
                               n_y=cfg.get_int("n_y", 129))
    return st, disp, wf


# -- commands ---------------------------------------------------------------


@click.group()
@click.version_option(__version__, prog_name="vorwaves")
def main():
    """Stream solutions, critical heads, conjugate depths and
    small-amplitude waves for unidirectional shear flows."""


@main.command(name="analyze")
@_run_options
def cmd_analyze(config_path, out_dir, tol):
    """Classification and both critical heads of the distribution."""

    def worker(cfg, out):
        dist = cfg.distribution()
        an = bernoulli.analyze(dist)
        cls = dist.classify()
        results = {
            "classification": an.condition,
            "max_Omega": cls.max_Omega,
            "s0": an.s0,
            "s_c": an.s_c,
            "r_c": an.r_c,
            "d_c": an.d_c,
            "d0": an.d0,
            "r0": an.r0,
            "phi_residual": an.phi_residual,
        }
        return results, []

    _execute("analyze", config_path, out_dir, tol, worker)


@main.command(name="stream")
@_run_options
def cmd_stream(config_path, out_dir, tol):
    """Stream profile for a given bottom slope s (profile.csv)."""

    def worker(cfg, out):
        dist = cfg.distribution()
        st = stream.solve_stream(dist, cfg.require_float("s"))
        p = np.linspace(0.0, 1.0, cfg.get_int("n_p", 257))
        heights = st.height_at(p)
        speed = 1.0 / st.slope_at(p)
        files = [_write_csv(out, "profile.csv", ["p", "height", "velocity"],
                            zip(p, heights, speed))]
        results = {
            "s": st.s,
            "d": st.d,
            "r": st.r,
            "u_prime_d": st.u_prime_d,
            "s0": st.s0,
            "classification": st.classification.condition,
        }
        return results, files

    _execute("stream", config_path, out_dir, tol, worker)


@main.command(name="conjugates")
@_run_options
def cmd_conjugates(config_path, out_dir, tol):
    """Conjugate slopes and depths for a given head r."""

    def worker(cfg, out):
        pair = bernoulli.conjugates(cfg.distribution(), cfg.require_float("r"))
        return dataclasses.asdict(pair), []

    _execute("conjugates", config_path, out_dir, tol, worker)


@main.command(name="dispersion")
@_run_options
def cmd_dispersion(config_path, out_dir, tol):
    """Least dispersion root for the stream at s (or the head r)."""

    def worker(cfg, out):
        dist = cfg.distribution()
        st = _stream_for(cfg, dist)
        disp = dispersion.find_tau0(st,
                                    tau_max=cfg.get_float("tau_max", 50.0),
                                    k_multiples=cfg.get_int("K", 10))
        results = {
            "s": st.s,
            "d": st.d,
            "r": st.r,
            "tau0": disp.tau0,
            "assumption_I": disp.assumption_I,
            "assumption_II": disp.assumption_II,
            "tau_max": disp.tau_max,
            "k_multiples": disp.k_multiples,
            "notes": list(disp.notes),
        }
        return results, []

    _execute("dispersion", config_path, out_dir, tol, worker)


@main.command(name="wave")
@_run_options
def cmd_wave(config_path, out_dir, tol):
    """First-order wave of amplitude t (surface.csv, field.csv)."""

    def worker(cfg, out):
        dist = cfg.distribution()
        st, disp, wf = _built_wave(cfg, dist)
        sc = linearwave.detect_sign_change(wf)
        files = [
            _write_csv(out, "surface.csv", ["x", "eta"], zip(wf.x, wf.eta)),
            _write_csv(out, "field.csv", ["x", "y", "psi"],
                       ((wf.x[j], wf.y[i, j], wf.psi[i, j])
                        for i in range(wf.y.shape[0])
                        for j in range(wf.y.shape[1]))),
        ]
        results = {
            "s": wf.s,
            "r": wf.r,
            "t": wf.t,
            "tau0": wf.tau0,
            "lam": wf.lam,
            "wavelength": wf.wavelength,
            "depth": st.d,
            "crest": float(np.max(wf.eta)),
            "trough": float(np.min(wf.eta)),
            "sign_change": dataclasses.asdict(sc),
        }
        return results, files

    _execute("wave", config_path, out_dir, tol, worker)


@main.command(name="check-bounds")
@_run_options
def cmd_check_bounds(config_path, out_dir, tol):
    """Depth-bound verdicts for a surface (given or freshly built)."""

    def worker(cfg, out):
        dist = cfg.distribution()
        r = cfg.require_float("r")
        files = []
        surface_path = cfg.get_str("surface")
        if surface_path is not None:
            eta = _surface_from_csv(surface_path)
            source = {"surface": surface_path}
        else:
            _, _, wf = _built_wave(cfg, dist)
            eta = wf.eta
            files.append(_write_csv(out, "surface.csv", ["x", "eta"],
                                    zip(wf.x, wf.eta)))
            source = {"built_wave": {"s": wf.s, "t": wf.t, "tau0": wf.tau0}}
        rep = bounds.check_bounds(dist, r, eta)
        results = {
            "r": rep.r,
            "classification": rep.condition,
            "eta_hat": rep.eta_hat,
            "eta_check": rep.eta_check,
            "d_minus": rep.d_minus,
            "d_plus": rep.d_plus,
            "d_c": rep.d_c,
            "d0": rep.d0,
            "r_c": rep.r_c,
            "r0": rep.r0,
            "stream_like": rep.stream_like,
            "max_interior": rep.max_interior,
            "verdicts": rep.verdict_block(),
            "surrogates": list(rep.surrogates),
            "notes": list(rep.notes),
            "surface_source": source,
        }
        return results, files

    _execute("check-bounds", config_path, out_dir, tol, worker)


@main.command(name="wheeler")
@_run_options
def cmd_wheeler(config_path, out_dir, tol):
    """Conjugate-flow integral identity on a strip (residuals.csv).

    With only ``r`` the strip holds the supercritical stream and the
    comparison slope is the subcritical one; ``s`` and ``s_ref`` select
    the pair directly.
    """

    def worker(cfg, out):
        dist = cfg.distribution()
        s_strip = cfg.get_float("s")
        s_ref = cfg.get_float("s_ref")
        if s_strip is None or s_ref is None:
            r = cfg.get_float("r")
            if r is None:
                raise ConfigError(
                    "missing required parameter: give 'r' or both 's' and "
                    "'s_ref'")
            pair = bernoulli.conjugates(dist, r)
            if pair.s_plus is None:
                raise NoStreamError(
                    f"no conjugate pair at r={r!r} (regime {pair.regime!r})")
            s_strip = pair.s_minus if s_strip is None else s_strip
            s_ref = pair.s_plus if s_ref is None else s_ref
        hf = hodograph.to_strip(stream.solve_stream(dist, s_strip),
                                n_p=cfg.get_int("n_p", 257),
                                n_q=cfg.get_int("n_q", 9),
                                q_span=cfg.get_float("q_span", 1.0))
        rep = hodograph.wheeler_identity(hf, s_ref, cfg.window(), dist)
        resid = hodograph.bernoulli_residual(hf)
        files = [_write_csv(out, "residuals.csv", ["q", "surface_residual"],
                            zip(resid.q, resid.samples))]
        results = {
            "strip_s": s_strip,
            "s": rep.s,
            "window": list(rep.window),
            "width": rep.width,
            "lhs": rep.lhs,
            "rhs": rep.rhs,
            "discrepancy": rep.discrepancy,
            "lhs_per_unit": rep.lhs_per_unit,
            "reduced": rep.reduced,
            "head_gap": rep.head_gap,
            "surface_residual_max": resid.max_abs,
        }
        return results, files

    _execute("wheeler", config_path, out_dir, tol, worker)


@main.command(name="scale")
@_run_options
def cmd_scale(config_path, out_dir, tol):
    """Convert a number between dimensional and scaled units."""

    def worker(cfg, out):
        Q = cfg.require_float("Q")
        g = cfg.require_float("g")
        quantity = cfg.require_str("quantity")
        value = cfg.require_float("value")
        direction = cfg.get_str("direction", "to-nondimensional")
        if direction not in ("to-nondimensional", "to-dimensional"):
            raise ConfigError(
                f"unknown direction {direction!r}; expected to-nondimensional "
                f"or to-dimensional")
        inverse = direction == "to-dimensional"
        converted = scale_to_nondimensional(Q, g, quantity, value,
                                            inverse=inverse)
        results = {
            "Q": Q,
            "g": g,
            "quantity": quantity,
            "direction": direction,
            "input": value,
            "output": converted,
            "length_scale": (Q * Q / g) ** _LENGTH_EXP,
            "velocity_scale": (Q * g) ** _LENGTH_EXP,
        }
        return results, []

    _execute("scale", config_path, out_dir, tol, worker)
