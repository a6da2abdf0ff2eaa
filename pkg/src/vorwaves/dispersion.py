"""Dispersion relation of a stream solution and its least positive root.

For a unidirectional stream with surface slope ``u'(d) != 0`` the linearized
surface condition at wavenumber ``tau`` reads

    sigma(tau) = u'(d) gamma'(d, tau) - 1 / u'(d) + omega(1) ,

where ``gamma`` solves ``-gamma'' + [tau^2 - omega'(u)] gamma = 0`` with
``gamma(0) = 0`` and ``gamma(d) = 1``.  Small-amplitude waves bifurcate at a
simple root ``tau0`` of sigma provided none of its integer multiples up to a
cutoff is also a root (no resonant harmonics).

``gamma`` is computed by shooting with ``gamma'(0) = 1`` and rescaling; the
growth ``~ exp(tau y)`` is tamed by splitting the column into chunks and
renormalizing the state between them, which cancels out of the ratio
``gamma'(d) / gamma(d)`` that sigma needs.  The scan over a tau grid
integrates one stacked system for all wavenumbers at once.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.integrate as _sint

from . import numerics
from .errors import BracketError, ConvergenceError, DomainError, ResonanceError, VorwavesError
from .stream import StreamSolution

__all__ = [
    "GammaSolution",
    "DispersionResult",
    "gamma_bvp",
    "sigma",
    "find_tau0",
]

# chunk the column so that tau * (chunk span) stays below this exponent;
# the shot gamma then never exceeds ~exp(150) between renormalizations
_CHUNK_EXPONENT = 150.0
_RENORM = 1e100

# |u'(d)| below this fails assumption (I): sigma has a 1/u'(d) term
_SLOPE_FLOOR = 1e-9

_ROOT_ACCEPT = 1e-9
_MULTIPLE_MARGIN = 1e-6


def _warn_piecewise(dist) -> Optional[str]:
    if dist.kind == "table":
        msg = ("piecewise-linear vorticity: using its almost-everywhere "
               "derivative in the linearized operator; the result is formal")
        warnings.warn(msg)
        return msg
    return None


def _batch_endpoint(stream: StreamSolution, taus: np.ndarray, rtol: float):
    """Shoot ``(u, gamma)`` jointly for all ``taus``; endpoint values only.

    Returns ``(g_d, gp_d)`` in a common (cancelling) renormalized scale
    per tau, so only the ratio ``gp_d / g_d`` is meaningful.
    """
    dist = stream.dist
    d = stream.d
    n = taus.size
    tau2 = taus * taus
    n_chunks = max(1, int(math.ceil(float(np.max(taus)) * d / _CHUNK_EXPONENT))) if n else 1
    bounds = np.linspace(0.0, d, n_chunks + 1)

    def rhs(t, y):
        out = np.empty_like(y)
        u = y[0]
        out[0] = y[1]
        out[1] = -dist._omega_scalar(u)
        out[2:2 + n] = y[2 + n:]
        out[2 + n:] = (tau2 - dist._omega_prime_scalar(u)) * y[2:2 + n]
        return out

    y = np.zeros(2 + 2 * n)
    y[1] = stream.s
    y[2 + n:] = 1.0
    for k in range(n_chunks):
        sol = _sint.solve_ivp(rhs, (bounds[k], bounds[k + 1]), y,
                              method="DOP853", rtol=rtol, atol=1e-14)
        if not sol.success:
            raise ConvergenceError(
                f"gamma shot failed on [{bounds[k]!r}, {bounds[k+1]!r}]: "
                f"{sol.message}")
        y = sol.y[:, -1].copy()
        mag = np.maximum(np.abs(y[2:2 + n]), np.abs(y[2 + n:]))
        fac = np.where(mag > _RENORM, mag, 1.0)
        y[2:2 + n] /= fac
        y[2 + n:] /= fac
    return y[2:2 + n], y[2 + n:]


@dataclass(frozen=True)
class GammaSolution:
    """The normalized transverse mode ``gamma(., tau)`` on ``[0, d]``."""

    tau: float
    grid: np.ndarray
    values: np.ndarray
    derivative_surface: float
    derivative_bottom: float


def gamma_bvp(stream: StreamSolution, tau: float,
              n_samples: int = 257) -> GammaSolution:
    """Solve the transverse mode problem at wavenumber ``tau``.

    Shooting with ``gamma'(0) = 1`` and rescaling so ``gamma(d) = 1``;
    chunked renormalization keeps the exponential growth representable
    at any ``tau``.

    Raises
    ------
    ResonanceError
        When the shot vanishes at the surface (``tau^2`` is a Dirichlet
        eigenvalue of the linearized operator): no normalization exists.
    """
    if tau < 0.0:
        raise DomainError(f"wavenumber tau={tau!r} must be nonnegative")
    _warn_piecewise(stream.dist)
    dist = stream.dist
    d = stream.d
    tau2 = tau * tau
    n_chunks = max(1, int(math.ceil(tau * d / _CHUNK_EXPONENT)))
    bounds = np.linspace(0.0, d, n_chunks + 1)

    def rhs(t, y):
        return (y[1], -dist._omega_scalar(y[0]),
                y[3], (tau2 - dist._omega_prime_scalar(y[0])) * y[2])

    y = (0.0, stream.s, 0.0, 1.0)
    sols = []
    logfac = [0.0]  # cumulative log renormalization applied after each chunk
    for k in range(n_chunks):
        sol = _sint.solve_ivp(rhs, (bounds[k], bounds[k + 1]), y,
                              method="DOP853", rtol=1e-12, atol=1e-14,
                              dense_output=True)
        if not sol.success:
            raise ConvergenceError(f"gamma shot failed: {sol.message}")
        sols.append(sol)
        y = sol.y[:, -1].copy()
        mag = max(abs(y[2]), abs(y[3]))
        fac = mag if mag > _RENORM else 1.0
        y[2] /= fac
        y[3] /= fac
        logfac.append(logfac[-1] + math.log(fac))
        y = tuple(y)

    g_d, gp_d = sols[-1].y[2, -1], sols[-1].y[3, -1]
    probe = sols[-1].sol(np.linspace(bounds[-2], bounds[-1], 33))[2]
    scale = max(float(np.max(np.abs(probe))), abs(gp_d) / max(tau, 1.0))
    if abs(g_d) <= 1e-10 * max(scale, 1e-300):
        raise ResonanceError(
            f"gamma({d!r}) vanishes at tau={tau!r}: Dirichlet resonance of "
            f"the transverse operator; no normalized mode exists")

    grid = np.linspace(0.0, d, n_samples)
    values = np.empty(n_samples)
    for k, sol in enumerate(sols):
        lo, hi = bounds[k], bounds[k + 1]
        mask = (grid >= lo) & (grid <= hi) if k == n_chunks - 1 else \
               (grid >= lo) & (grid < hi)
        if not np.any(mask):
            continue
        raw = sol.sol(grid[mask])[2]
        values[mask] = raw * (math.exp(logfac[k] - logfac[-1]) / g_d)
    values[0] = 0.0
    values[-1] = 1.0
    try:
        deriv_bottom = math.exp(-logfac[-1]) / g_d
    except OverflowError:
        deriv_bottom = 0.0
    return GammaSolution(
        tau=float(tau),
        grid=grid,
        values=values,
        derivative_surface=gp_d / g_d,
        derivative_bottom=deriv_bottom,
    )


def _require_slope(stream: StreamSolution) -> float:
    upd = stream.u_prime_d
    if abs(upd) <= _SLOPE_FLOOR:
        raise DomainError(
            f"surface slope u'(d)={upd!r} vanishes: the dispersion relation "
            f"is undefined (assumption on the surface speed fails)")
    return upd


def sigma(stream: StreamSolution, tau: float) -> float:
    """Dispersion value ``sigma(tau)`` of ``stream``.

    Parameters
    ----------
    stream : StreamSolution
        Must have non-vanishing surface slope.
    tau : float
        Nonnegative wavenumber; ``tau = 0`` is taken as the limit value
        ``u'(d) / d - 1 / u'(d) + omega(1)``.
    """
    if tau < 0.0:
        raise DomainError(f"wavenumber tau={tau!r} must be nonnegative")
    upd = _require_slope(stream)
    _warn_piecewise(stream.dist)
    w1 = stream.dist._omega_scalar(1.0)
    if tau == 0.0:
        return upd / stream.d - 1.0 / upd + w1
    g_d, gp_d = _batch_endpoint(stream, np.array([tau]), rtol=1e-12)
    if abs(g_d[0]) <= 1e-300 or not math.isfinite(gp_d[0] / g_d[0]):
        raise ResonanceError(
            f"gamma(d) vanishes at tau={tau!r}: dispersion pole")
    return upd * (gp_d[0] / g_d[0]) - 1.0 / upd + w1


@dataclass(frozen=True)
class DispersionResult:
    """Scan of ``sigma`` and the bifurcation wavenumber, if any.

    ``assumption_I`` records that the surface slope does not vanish;
    ``assumption_II`` is true only when a least positive root ``tau0``
    exists and no integer multiple ``k tau0`` (k = 2..k_multiples) is
    also a root within margin.  Whenever ``tau0`` is absent,
    ``assumption_II`` is false.
    """

    stream: StreamSolution
    tau0: Optional[float]
    taus: np.ndarray
    sigmas: np.ndarray
    assumption_I: bool
    assumption_II: bool
    tau_max: float
    k_multiples: int
    notes: tuple


def find_tau0(stream: StreamSolution, tau_max: float = 50.0,
              k_multiples: int = 10, scan_step: float = 0.01) -> DispersionResult:
    """Scan ``sigma`` on ``(0, tau_max]`` for its least positive root.

    The scan grid starts just above zero, steps by ``scan_step``, and each
    sign change is polished by bracketed root finding; a polished candidate
    is accepted only if ``|sigma| < 1e-9`` there (poles produce sign flips
    too and are rejected by this test).  Absence of a root is an answer,
    not an error.
    """
    notes = []
    if abs(stream.u_prime_d) <= _SLOPE_FLOOR:
        notes.append("surface slope vanishes; dispersion relation undefined")
        return DispersionResult(
            stream=stream, tau0=None, taus=np.empty(0), sigmas=np.empty(0),
            assumption_I=False, assumption_II=False,
            tau_max=tau_max, k_multiples=k_multiples, notes=tuple(notes))
    if tau_max <= 0.0:
        raise DomainError(f"tau_max={tau_max!r} must be positive")
    msg = _warn_piecewise(stream.dist)
    if msg:
        notes.append(msg)
    upd = stream.u_prime_d
    w1 = stream.dist._omega_scalar(1.0)
    taus = np.concatenate(([1e-6], np.arange(scan_step, tau_max + 0.5 * scan_step,
                                             scan_step)))
    g_d, gp_d = _batch_endpoint(stream, taus, rtol=1e-9)
    with np.errstate(divide="ignore", invalid="ignore"):
        sig = upd * (gp_d / g_d) - 1.0 / upd + w1
    sig = np.where(np.isfinite(sig), sig, np.nan)

    tau0: Optional[float] = None
    for i in range(taus.size - 1):
        a, b = sig[i], sig[i + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            continue
        if a == 0.0 and taus[i] <= 1e-6:
            continue
        if a * b > 0.0:
            continue
        try:
            root = numerics.find_root(lambda t: sigma(stream, t),
                                      numerics.Bracket(float(taus[i]),
                                                       float(taus[i + 1])),
                                      tol=1e-13)
            if abs(sigma(stream, root)) < _ROOT_ACCEPT:
                tau0 = root
                break
            notes.append(f"rejected sign change near tau={root!r}: "
                         f"|sigma| stays above {_ROOT_ACCEPT} (pole)")
        except (BracketError, VorwavesError):
            continue
    if tau0 is None:
        notes.append(f"no positive root of sigma on (0, {tau_max!r}]")
        return DispersionResult(
            stream=stream, tau0=None, taus=taus, sigmas=sig,
            assumption_I=True, assumption_II=False,
            tau_max=tau_max, k_multiples=k_multiples, notes=tuple(notes))

    assumption_ii = True
    for k in range(2, k_multiples + 1):
        try:
            val = sigma(stream, k * tau0)
        except VorwavesError:
            continue  # a pole at a multiple is not a root
        if abs(val) <= _MULTIPLE_MARGIN:
            assumption_ii = False
            notes.append(f"sigma({k} * tau0) = {val!r} within margin "
                         f"{_MULTIPLE_MARGIN}: resonant harmonic")
            break
    return DispersionResult(
        stream=stream, tau0=tau0, taus=taus, sigmas=sig,
        assumption_I=True, assumption_II=assumption_ii,
        tau_max=tau_max, k_multiples=k_multiples, notes=tuple(notes))
