"""Shared numerical kernels: quadrature, root finding, minimization, ODE/BVP.

All higher modules funnel their numerics through this one.  The routines
wrap scipy with the toolkit's conventions layered on top: endpoint
singularities of inverse-square-root type are removed by substitution
before the adaptive rule sees them, failures surface as typed exceptions
carrying the best estimate reached, and tolerances have a single default
that can be seeded from the environment.

Conventions
-----------
* Integrands are scalar callables of one float.
* A "singular" endpoint means the integrand behaves like
  ``c / sqrt(x - a)`` (or ``c / sqrt(b - x)``) there; the substitution
  ``x = a + v**2`` turns that into a bounded integrand.
* Brackets are closed intervals given as :class:`Bracket`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate as _sint
from scipy import optimize as _sopt

from .errors import (
    BracketError,
    ConvergenceError,
    InvalidIntegrandError,
    ResonanceError,
)

__all__ = [
    "QuadratureSpec",
    "default_quadrature_spec",
    "integrate",
    "Bracket",
    "find_root",
    "minimize_unimodal",
    "solve_ivp",
    "BvpSolution",
    "shoot_linear_bvp",
]

_TOL_ENV = "TOOL_SEED_TOLERANCE"


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance and endpoint-behavior settings for :func:`integrate`.

    Parameters
    ----------
    abs_tol, rel_tol : float
        Absolute and relative tolerance targets, both strictly positive.
    singular_left, singular_right : bool
        Declare an inverse-square-root singularity at the corresponding
        endpoint; the integrator substitutes it away.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    singular_left: bool = False
    singular_right: bool = False

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0 and math.isfinite(self.abs_tol)):
            raise ValueError(f"abs_tol must be positive and finite, got {self.abs_tol}")
        if not (self.rel_tol > 0.0 and math.isfinite(self.rel_tol)):
            raise ValueError(f"rel_tol must be positive and finite, got {self.rel_tol}")


def default_quadrature_spec() -> QuadratureSpec:
    """Build the default spec, seeding ``abs_tol`` from ``TOOL_SEED_TOLERANCE``.

    The environment variable, when set to a positive float, replaces the
    built-in ``1e-12`` absolute tolerance.  Malformed values are ignored.
    """
    abs_tol = 1e-12
    raw = os.environ.get(_TOL_ENV)
    if raw is not None:
        try:
            candidate = float(raw)
        except ValueError:
            candidate = -1.0
        if candidate > 0.0 and math.isfinite(candidate):
            abs_tol = candidate
    return QuadratureSpec(abs_tol=abs_tol)


def _finite_checked(f: Callable[[float], float], a: float, b: float):
    """Wrap ``f`` so a NaN/inf evaluation raises instead of poisoning quad."""

    def g(x: float) -> float:
        val = f(x)
        if not math.isfinite(val):
            raise InvalidIntegrandError(
                f"integrand returned non-finite value {val!r} at x={x!r} "
                f"inside [{a!r}, {b!r}]"
            )
        return val

    return g


def _quad(f, a, b, spec: QuadratureSpec) -> float:
    out = _sint.quad(
        f, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=200, full_output=1
    )
    if len(out) == 4:
        # (value, error, infodict, message): QUADPACK gave up
        value, err = out[0], out[1]
        raise ConvergenceError(
            f"quadrature on [{a!r}, {b!r}] did not converge: {out[3].strip()} "
            f"(estimate {value!r}, error bound {err!r})"
        )
    return out[0]


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: Optional[QuadratureSpec] = None,
) -> float:
    """Integrate ``f`` over ``[a, b]`` with adaptive Gauss-Kronrod quadrature.

    Endpoint singularities declared on ``spec`` are removed by the
    substitution ``x = endpoint -/+ v**2`` (so ``dx = 2 v dv`` cancels an
    inverse square root).  When both endpoints are singular the interval
    is split at its midpoint and each half handled separately.

    Returns 0.0 when ``a == b``.  Raises :class:`InvalidIntegrandError` if
    the integrand produces a non-finite value, :class:`ConvergenceError`
    if the adaptive rule cannot meet tolerance.
    """
    if spec is None:
        spec = default_quadrature_spec()
    if a == b:
        return 0.0
    if b < a:
        return -integrate(f, b, a, spec)

    g = _finite_checked(f, a, b)

    if spec.singular_left and spec.singular_right:
        mid = 0.5 * (a + b)
        left = QuadratureSpec(spec.abs_tol / 2, spec.rel_tol, True, False)
        right = QuadratureSpec(spec.abs_tol / 2, spec.rel_tol, False, True)
        return integrate(f, a, mid, left) + integrate(f, mid, b, right)

    if spec.singular_left:
        width = b - a

        def h(v: float) -> float:
            x = min(a + v * v, b)
            if x == a and v > 0.0:
                # v**2 underflowed against a; step to the nearest interior
                # point so the integrand is never sampled at the singularity.
                x = math.nextafter(a, b)
            return 2.0 * v * g(x)

        return _quad(h, 0.0, math.sqrt(width), spec)

    if spec.singular_right:
        width = b - a

        def h(v: float) -> float:
            x = max(b - v * v, a)
            if x == b and v > 0.0:
                x = math.nextafter(b, a)
            return 2.0 * v * g(x)

        return _quad(h, 0.0, math.sqrt(width), spec)

    return _quad(g, a, b, spec)


@dataclass(frozen=True)
class Bracket:
    """Closed interval ``[lo, hi]`` with optional cached endpoint values."""

    lo: float
    hi: float
    f_lo: Optional[float] = None
    f_hi: Optional[float] = None

    def __post_init__(self) -> None:
        if not (self.lo < self.hi):
            raise ValueError(f"bracket requires lo < hi, got [{self.lo!r}, {self.hi!r}]")


def find_root(
    f: Callable[[float], float],
    bracket: Bracket,
    tol: float = 1e-13,
) -> float:
    """Locate the root of ``f`` inside ``bracket`` by Brent's method.

    The endpoint values must differ in sign (an endpoint exactly at zero
    is returned directly).  Raises :class:`BracketError` with both values
    when the sign condition fails.
    """
    lo, hi = bracket.lo, bracket.hi
    f_lo = bracket.f_lo if bracket.f_lo is not None else f(lo)
    f_hi = bracket.f_hi if bracket.f_hi is not None else f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise BracketError(
            f"no sign change on [{lo!r}, {hi!r}]: f(lo)={f_lo!r}, f(hi)={f_hi!r}"
        )
    return float(_sopt.brentq(f, lo, hi, xtol=tol, rtol=8.9e-16, maxiter=200))


def minimize_unimodal(
    f: Callable[[float], float],
    bracket: Bracket,
    tol: float = 1e-10,
) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on ``bracket``; return ``(argmin, min)``.

    Uses bounded golden-section/parabolic search.  If the located argmin
    pins to within ``2 * tol`` of an endpoint the interval did not
    enclose an interior minimum; :class:`BracketError` reports the three
    probe values (endpoints and midpoint) to show the trend.
    """
    lo, hi = bracket.lo, bracket.hi
    res = _sopt.minimize_scalar(
        f, bounds=(lo, hi), method="bounded", options={"xatol": tol}
    )
    x = float(res.x)
    if min(x - lo, hi - x) <= 2.0 * tol:
        mid = lo + 0.5 * (hi - lo)
        raise BracketError(
            f"no interior minimum on [{lo!r}, {hi!r}]: "
            f"f(lo)={f(lo)!r}, f(mid)={f(mid)!r}, f(hi)={f(hi)!r}, "
            f"argmin pinned at {x!r}"
        )
    return x, float(res.fun)


def solve_ivp(
    rhs: Callable[[float, np.ndarray], Sequence[float]],
    y0: Sequence[float],
    span: tuple[float, float],
    tol: float = 1e-12,
    events: Optional[Sequence[Callable]] = None,
    max_step: float = np.inf,
):
    """Integrate ``y' = rhs(t, y)`` with a high-order adaptive Runge-Kutta.

    Thin wrapper over DOP853 with dense output always on and the
    toolkit's tolerance convention (``rtol`` floored at machine-level,
    ``atol`` two orders tighter than ``tol``).  Event functions pass
    through unchanged, including ``direction``/``terminal`` attributes.

    Returns the scipy result object.  Raises :class:`ConvergenceError`
    if the integrator fails, with the failure location in the message.
    """
    rtol = max(tol, 2.5e-14)
    atol = max(1e-14, 0.01 * tol)
    sol = _sint.solve_ivp(
        rhs,
        span,
        np.asarray(y0, dtype=float),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=True,
        events=events,
        max_step=max_step,
    )
    if not sol.success:
        reached = sol.t[-1] if sol.t.size else span[0]
        raise ConvergenceError(
            f"ODE integration failed: {sol.message.strip()} "
            f"(reached t={reached!r} of [{span[0]!r}, {span[1]!r}])"
        )
    return sol


@dataclass(frozen=True)
class BvpSolution:
    """Solution of a two-point linear boundary-value problem on a grid.

    Attributes
    ----------
    grid : ndarray
        Sample abscissae, ascending, including both endpoints.
    values : ndarray
        Solution values on ``grid``.
    derivative_left, derivative_right : float
        One-sided derivatives at the interval ends.
    dense : callable
        Vectorized evaluator for the solution anywhere on the interval.
    """

    grid: np.ndarray
    values: np.ndarray
    derivative_left: float
    derivative_right: float
    dense: Callable[[np.ndarray], np.ndarray]


def shoot_linear_bvp(
    coeff: Callable[[float], float],
    rhs: Callable[[float], float],
    interval: tuple[float, float],
    left_value: float,
    right_value: float,
    tol: float = 1e-12,
    n_samples: int = 257,
) -> BvpSolution:
    """Solve ``-v'' + coeff(x) v = rhs(x)`` with Dirichlet data by shooting.

    Superposition: integrate the particular solution ``P`` (with
    ``P(a) = left_value``, ``P'(a) = 0``) and the homogeneous solution
    ``phi`` (``phi(a) = 0``, ``phi'(a) = 1``) together in one pass, then
    fix ``v = P + alpha * phi`` from the right boundary value.

    Raises :class:`ResonanceError` when ``phi(b)`` vanishes relative to
    the scale of ``phi`` (the operator has the interval in its Dirichlet
    spectrum, so the data cannot be matched).
    """
    a, b = interval
    if not (b > a):
        raise ValueError(f"interval must satisfy a < b, got [{a!r}, {b!r}]")

    def system(t: float, y: np.ndarray):
        c = coeff(t)
        # y = (P, P', phi, phi')
        return (y[1], c * y[0] - rhs(t), y[3], c * y[2])

    sol = solve_ivp(system, (left_value, 0.0, 0.0, 1.0), (a, b), tol=tol)
    P_b, Pp_b, phi_b, phip_b = sol.y[:, -1]
    scale = max(1.0, float(np.max(np.abs(sol.y[2]))))
    if abs(phi_b) <= 1e-12 * scale:
        raise ResonanceError(
            f"homogeneous solution vanishes at the right endpoint "
            f"(phi({b!r})={phi_b!r}); boundary data cannot be matched"
        )
    alpha = (right_value - P_b) / phi_b

    grid = np.linspace(a, b, n_samples)
    states = sol.sol(grid)
    values = states[0] + alpha * states[2]
    deriv = states[1] + alpha * states[3]
    # pin the boundary values exactly; shooting noise is ~tol
    values[0], values[-1] = left_value, right_value

    dense_sol = sol.sol

    def dense(x: np.ndarray) -> np.ndarray:
        st = dense_sol(np.asarray(x, dtype=float))
        return st[0] + alpha * st[2]

    return BvpSolution(
        grid=grid,
        values=values,
        derivative_left=float(deriv[0]),
        derivative_right=float(deriv[-1]),
        dense=dense,
    )
