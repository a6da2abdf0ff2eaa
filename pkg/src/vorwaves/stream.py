"""Shear-flow (stream) solutions of the channel problem.

A stream solution with bottom slope ``s`` solves ``u'' + omega(u) = 0`` with
``u(0) = 0`` and ``u(d) = 1`` for the depth ``d`` determined by ``s``.  The
first integral ``u'^2 = s^2 - 2 Omega(u)`` turns everything into quadratures
in the normalized stream variable ``tau = u``:

* depth           ``d(s)   = int_0^1 (s^2 - 2 Omega)^(-1/2) dtau``
* height profile  ``H(p;s) = int_0^p (s^2 - 2 Omega)^(-1/2) dtau``
* tail weight     ``Phi(p;s) = int_0^p (s^2 - 2 Omega)^(-3/2) dtau``

All integrands share the margin ``sigma2 + 2 gap(tau)`` where
``sigma2 = s^2 - s0^2`` and ``gap = max Omega - Omega >= 0``.  At ``s = s0``
the margin vanishes wherever Omega peaks; when the peak sits at an endpoint
and is non-degenerate the inverse square root stays integrable, which is what
makes the zero-margin depth d0 finite under classifications "ii"/"iii".

Direct integration of the ODE is available separately through
:func:`shoot_stream`, which does not assume unidirectionality and reports
sign changes and turning points of trajectories below the threshold slope.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from math import pi, sqrt
from typing import Optional

import numpy as np

from . import numerics
from .errors import ConvergenceError, DivergenceError, DomainError
from .vorticity import FlowClassification, VorticityDistribution

__all__ = [
    "StreamSolution",
    "ShotStream",
    "depth",
    "profile",
    "phi",
    "surface_slope_squared",
    "solve_stream",
    "invert_profile",
    "shoot_stream",
]

_PROFILE_NODES = 257

# relative half-width of the snap window that identifies s with s0, and of
# the guard band under classification "i" where d(s) is declared unreliable
_SNAP = 1e-13
_GUARD = 1e-9


def _margin(dist: VorticityDistribution, s: float):
    """Validate ``s`` against the threshold and return ``(sigma2, cls)``.

    ``sigma2`` comes out exactly zero inside the snap window around ``s0``
    (classification "ii"/"iii" only); the difference-of-squares form keeps
    it well conditioned just above the threshold.
    """
    cls = dist.classify()
    s0 = cls.s0
    scale = max(1.0, s0)
    if s < s0 - _SNAP * scale:
        raise DomainError(
            f"no unidirectional stream for s={s!r}: below the threshold s0={s0!r}")
    if s <= s0 + _SNAP * scale:
        if not cls.d0_finite:
            raise DivergenceError(
                f"d(s) diverges as s -> s0 = {s0!r} under classification "
                f"'{cls.condition}'; s={s!r} is inside the snap window")
        return 0.0, cls
    if not cls.d0_finite and s < s0 + _GUARD * scale:
        raise DivergenceError(
            f"s={s!r} is within the guard band above s0={s0!r}; the depth "
            f"integral is unreliable there under classification '{cls.condition}'")
    sigma2 = (s - s0) * (s + s0) if s0 > 0.0 else s * s
    return sigma2, cls


def _speed_integral(
    dist: VorticityDistribution,
    cls: FlowClassification,
    sigma2: float,
    lo: float,
    hi: float,
    power: float,
) -> float:
    """``int_lo^hi (sigma2 + 2 gap)^power dtau`` with stable endpoints.

    Direct evaluation of ``gap = max Omega - Omega`` loses every digit as
    the surface maximizer is approached, which stalls the adaptive rule and
    can even divide by zero once the difference rounds to nothing.  When
    ``tau = 1`` carries the maximum the upper part is therefore integrated
    in the distance-to-surface variable, where the gap is built by
    cancellation-free accumulation from the surface down.
    """
    big = cls.max_Omega
    left_sing = lo == 0.0 and 0.0 in cls.maximizers
    right_sing = hi == 1.0 and 1.0 in cls.maximizers
    spec = numerics.default_quadrature_spec()

    def f(t: float) -> float:
        gap = big - dist._Omega_scalar(t)
        if gap < 0.0:
            gap = 0.0
        return (sigma2 + 2.0 * gap) ** power

    if right_sing:
        gap1 = big - dist._Omega_scalar(1.0)
        if gap1 < 0.0:
            gap1 = 0.0

        def g(delta: float) -> float:
            gap = gap1 + dist._gap_from_surface(delta)
            return (sigma2 + 2.0 * gap) ** power

        dspec = dataclasses.replace(spec, singular_left=True)
        if left_sing:
            lspec = dataclasses.replace(spec, singular_left=True)
            return (numerics.integrate(f, lo, 0.5, lspec)
                    + numerics.integrate(g, 0.0, 0.5, dspec))
        return numerics.integrate(g, 0.0, hi - lo, dspec)

    lspec = dataclasses.replace(spec, singular_left=left_sing)
    return numerics.integrate(f, lo, hi, lspec)


def depth(dist: VorticityDistribution, s: float) -> float:
    """Depth ``d(s)`` of the stream solution with bottom slope ``s``.

    Parameters
    ----------
    dist : VorticityDistribution
    s : float
        Bottom slope ``u'(0)``; must satisfy ``s > s0`` (``s = s0`` is
        allowed when the classification makes ``d(s0)`` finite).

    Returns
    -------
    float
    """
    sigma2, cls = _margin(dist, s)
    return _speed_integral(dist, cls, sigma2, 0.0, 1.0, -0.5)


def profile(dist: VorticityDistribution, s: float, p: float) -> float:
    """Height ``H(p; s)`` at which the stream function reaches ``p``."""
    if not -1e-12 <= p <= 1.0 + 1e-12:
        raise DomainError(f"profile argument p={p!r} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    sigma2, cls = _margin(dist, s)
    return _speed_integral(dist, cls, sigma2, 0.0, p, -0.5)


def phi(dist: VorticityDistribution, s: float, p: float = 1.0) -> float:
    """Tail weight ``Phi(p; s) = int_0^p (s^2 - 2 Omega)^(-3/2) dtau``.

    Strictly decreasing in ``s``; ``Phi(1; s) = 1`` picks out the critical
    slope.  Requires ``s`` strictly above the threshold: at ``s = s0`` the
    ``-3/2`` power is not integrable.
    """
    if not -1e-12 <= p <= 1.0 + 1e-12:
        raise DomainError(f"phi argument p={p!r} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    sigma2, cls = _margin(dist, s)
    if sigma2 == 0.0:
        raise DomainError(
            f"Phi is not defined at s = s0 = {cls.s0!r}: the integrand has a "
            f"non-integrable endpoint there")
    return _speed_integral(dist, cls, sigma2, 0.0, p, -1.5)


def _phi_cumulative(dist: VorticityDistribution, s: float, grid) -> np.ndarray:
    """Tail weight ``Phi`` accumulated along an increasing p-grid.

    Same integrand as :func:`phi`; one quadrature per grid cell instead of
    one per evaluation point.
    """
    sigma2, cls = _margin(dist, s)
    if sigma2 == 0.0:
        raise DomainError(
            f"Phi is not defined at s = s0 = {cls.s0!r}: the integrand has "
            f"a non-integrable endpoint there")
    grid = np.asarray(grid, dtype=float)
    out = np.empty(grid.shape)
    out[0] = _speed_integral(dist, cls, sigma2, 0.0, float(grid[0]), -1.5)
    for i in range(1, grid.size):
        out[i] = out[i - 1] + _speed_integral(
            dist, cls, sigma2, float(grid[i - 1]), float(grid[i]), -1.5)
    return out


def surface_slope_squared(dist: VorticityDistribution, s: float) -> float:
    """``u'(d)^2 = s^2 - 2 Omega(1)``, exactly zero when the margin closes."""
    sigma2, cls = _margin(dist, s)
    gap1 = cls.max_Omega - dist._Omega_scalar(1.0)
    if gap1 < 0.0:
        gap1 = 0.0
    return sigma2 + 2.0 * gap1


class StreamSolution:
    """A unidirectional stream solution sampled on a Chebyshev profile.

    The height profile ``H(p; s)`` is stored at 257 Chebyshev-Lobatto
    nodes in ``p`` and evaluated in between by barycentric interpolation;
    the inverse map ``u(y)`` runs a Newton iteration on the profile with
    the exact analytic slope ``H' = (sigma2 + 2 gap)^(-1/2)``.

    Attributes
    ----------
    s, d, r : float
        Bottom slope, depth and Bernoulli head ``(u'(d)^2 + 2 d) / 3``.
    u_prime_d : float
        Surface slope ``sqrt(s^2 - 2 Omega(1))``.
    classification : FlowClassification
    """

    def __init__(self, dist: VorticityDistribution, s: float):
        sigma2, cls = _margin(dist, s)
        self.dist = dist
        self.s = float(s)
        self.sigma2 = sigma2
        self.classification = cls
        self.s0 = cls.s0

        n = _PROFILE_NODES
        k = np.arange(n)
        v = 0.5 * (1.0 - np.cos(pi * k / (n - 1)))
        v[0] = 0.0
        v[-1] = 1.0
        # at s = s0 the profile has a square-root branch wherever an endpoint
        # carries the Omega maximum; interpolating in a variable that unfolds
        # the root keeps the barycentric evaluation spectrally accurate
        self._left_sqrt = sigma2 == 0.0 and 0.0 in cls.maximizers
        self._right_sqrt = sigma2 == 0.0 and 1.0 in cls.maximizers
        self._v_nodes = v
        self.p_nodes = self._fold(v)
        self.p_nodes[0] = 0.0
        self.p_nodes[-1] = 1.0
        self._bary_w = np.where(k % 2 == 0, 1.0, -1.0)
        self._bary_w[0] *= 0.5
        self._bary_w[-1] *= 0.5

        H = np.empty(n)
        H[0] = 0.0
        for i in range(1, n):
            H[i] = H[i - 1] + _speed_integral(
                dist, cls, sigma2,
                float(self.p_nodes[i - 1]), float(self.p_nodes[i]), -0.5)
        self.H_nodes = H
        self.d = float(H[-1])
        upd2 = sigma2 + 2.0 * max(cls.max_Omega - dist._Omega_scalar(1.0), 0.0)
        self.u_prime_d = sqrt(upd2)
        self.r = (upd2 + 2.0 * self.d) / 3.0

    # -- profile evaluation ----------------------------------------------------

    def _fold(self, v):
        """Interpolation variable -> stream-function value ``p``."""
        if self._left_sqrt and self._right_sqrt:
            return np.sin(0.5 * pi * v) ** 2
        if self._left_sqrt:
            return v * v
        if self._right_sqrt:
            return v * (2.0 - v)
        return np.array(v, dtype=float)

    def _unfold(self, p):
        """Stream-function value ``p`` -> interpolation variable."""
        if self._left_sqrt and self._right_sqrt:
            w = (2.0 / pi) * np.arcsin(np.sqrt(p))
        elif self._left_sqrt:
            w = np.sqrt(p)
        elif self._right_sqrt:
            w = 1.0 - np.sqrt(1.0 - p)
        else:
            return np.asarray(p, dtype=float)
        return np.where(p == 1.0, 1.0, np.where(p == 0.0, 0.0, w))

    def height_at(self, p):
        """Barycentric evaluation of ``H(p; s)`` (scalar or array)."""
        arr = np.asarray(p, dtype=float)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        if arr.size and (arr.min() < -1e-12 or arr.max() > 1.0 + 1e-12):
            raise DomainError(f"profile argument outside [0, 1]: {arr!r}")
        arr = self._unfold(np.clip(arr, 0.0, 1.0))
        diff = arr[:, None] - self._v_nodes[None, :]
        hit = diff == 0.0  # exact node hits bypass the barycentric ratio
        out = np.empty(arr.shape)
        exact = np.any(hit, axis=1)
        if np.any(exact):
            idx = np.argmax(hit[exact], axis=1)
            out[exact] = self.H_nodes[idx]
        rest = ~exact
        if np.any(rest):
            w = self._bary_w[None, :] / diff[rest]
            out[rest] = (w @ self.H_nodes) / w.sum(axis=1)
        return float(out[0]) if scalar else out

    def slope_at(self, p):
        """Analytic profile slope ``H'(p) = (sigma2 + 2 gap(p))^(-1/2)``."""
        arr = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
        gap = np.maximum(self.classification.max_Omega - self.dist._Omega_ext(arr), 0.0)
        with np.errstate(divide="ignore"):  # slope at a surface maximizer is inf
            return 1.0 / np.sqrt(self.sigma2 + 2.0 * gap)

    def velocity_at(self, y):
        """Horizontal velocity ``u'`` at height ``y``.

        Equal to ``sqrt(sigma2 + 2 gap)`` along the first integral; always
        the nonnegative branch (the solution is unidirectional).
        """
        p = self.u_at(y)
        gap = np.maximum(
            self.classification.max_Omega - self.dist._Omega_ext(np.asarray(p)), 0.0)
        out = np.sqrt(self.sigma2 + 2.0 * gap)
        return float(out) if np.ndim(p) == 0 else out

    def u_at(self, y):
        """Invert the profile: the stream value ``u`` at height ``y``.

        ``y`` outside ``[0, d]`` (beyond a relative slack of 1e-9) is a
        domain error.  Newton on ``H(p) - y`` with the analytic slope;
        the multiplicative update keeps endpoint singularities harmless.
        """
        arr = np.asarray(y, dtype=float)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr).astype(float)
        slack = 1e-9 * max(1.0, self.d)
        if arr.size and (arr.min() < -slack or arr.max() > self.d + slack):
            bad = arr[(arr < -slack) | (arr > self.d + slack)]
            raise DomainError(
                f"height {float(bad.flat[0])!r} outside the water column "
                f"[0, {self.d!r}]")
        arr = np.clip(arr, 0.0, self.d)
        p = np.interp(arr, self.H_nodes, self.p_nodes)
        gap_big = self.classification.max_Omega
        for _ in range(30):
            resid = self.height_at(p) - arr
            gap = np.maximum(gap_big - self.dist._Omega_ext(p), 0.0)
            p = np.clip(p - resid * np.sqrt(self.sigma2 + 2.0 * gap), 0.0, 1.0)
        resid = np.abs(self.height_at(p) - arr)
        if resid.size and resid.max() > 1e-9 * max(1.0, self.d):
            raise ConvergenceError(
                f"profile inversion stalled: residual {float(resid.max())!r} "
                f"at y={float(arr[int(np.argmax(resid))])!r}")
        return float(p[0]) if scalar else p

    def __repr__(self) -> str:
        return (f"StreamSolution(s={self.s!r}, d={self.d!r}, r={self.r!r}, "
                f"condition={self.classification.condition!r})")


def solve_stream(dist: VorticityDistribution, s: float) -> StreamSolution:
    """Construct the stream solution with bottom slope ``s``."""
    return StreamSolution(dist, s)


def invert_profile(stream: StreamSolution, y):
    """Stream value ``u`` at height ``y``; see :meth:`StreamSolution.u_at`."""
    return stream.u_at(y)


@dataclass
class ShotStream:
    """Result of integrating ``u'' + omega(u) = 0`` directly from the bottom.

    Produced by :func:`shoot_stream`; unlike :class:`StreamSolution` the
    trajectory may turn around and dip below zero before first reaching
    ``u = 1``, which is exactly what the sign-change diagnostics report.

    Attributes
    ----------
    d : float
        First height where ``u = 1``.
    min_u, min_location : float
        Minimum of ``u`` over ``[0, d)`` and where it occurs (turning
        points and the bottom are the only candidates).
    sign_change : bool
        True when ``min_u`` drops below ``-10 *`` the solver tolerance.
    unidirectional : bool
        True when ``u'`` never vanishes strictly inside ``(0, d)``.
    later_crossings : int or None
        Crossings of ``u = 1`` beyond the first, counted on a second
        looser pass up to ``max_depth``; None if that pass fails.
    r : float
        Bernoulli head ``(u'(d)^2 + 2 d) / 3``.
    """

    dist: VorticityDistribution
    s: float
    d: float
    grid: np.ndarray
    u_samples: np.ndarray
    u_prime_d: float
    min_u: float
    min_location: float
    sign_change: bool
    unidirectional: bool
    later_crossings: Optional[int]
    r: float
    tolerance: float
    _dense: object = field(repr=False, default=None)

    def u_at(self, y):
        """Dense-output evaluation of ``u`` on ``[0, d]``."""
        arr = np.asarray(y, dtype=float)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        slack = 1e-9 * max(1.0, self.d)
        if arr.size and (arr.min() < -slack or arr.max() > self.d + slack):
            raise DomainError(f"height outside [0, {self.d!r}]")
        out = self._dense(np.clip(arr, 0.0, self.d))[0]
        return float(out[0]) if scalar else out

    def velocity_at(self, y):
        """Dense-output evaluation of ``u'`` on ``[0, d]`` (sign included)."""
        arr = np.asarray(y, dtype=float)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        slack = 1e-9 * max(1.0, self.d)
        if arr.size and (arr.min() < -slack or arr.max() > self.d + slack):
            raise DomainError(f"height outside [0, {self.d!r}]")
        out = self._dense(np.clip(arr, 0.0, self.d))[1]
        return float(out[0]) if scalar else out


def shoot_stream(dist: VorticityDistribution, s: float,
                 max_depth: float = 10.0, tol: float = 1e-12) -> ShotStream:
    """Integrate the bottom-value problem until the surface value is reached.

    Parameters
    ----------
    dist : VorticityDistribution
    s : float
        Bottom slope ``u'(0)``; any finite value, including negative.
    max_depth : float
        Give up (with :class:`ConvergenceError`) if ``u`` never reaches 1
        before this height.
    tol : float
        Integration tolerance; also sets the sign-change threshold.
    """
    def rhs(t, y):
        return (y[1], -dist._omega_scalar(y[0]))

    def hit_surface(t, y):
        return y[0] - 1.0

    hit_surface.terminal = True
    hit_surface.direction = 1.0

    def turning(t, y):
        return y[1]

    turning.direction = 0.0

    sol = numerics.solve_ivp(rhs, (0.0, s), (0.0, max_depth), tol=tol,
                             events=[hit_surface, turning])
    if len(sol.t_events[0]) == 0:
        u_end, up_end = sol.y[0, -1], sol.y[1, -1]
        raise ConvergenceError(
            f"u never reached 1 before height {max_depth!r}: final state "
            f"u={float(u_end)!r}, u'={float(up_end)!r}")
    d = float(sol.t_events[0][0])
    u_prime_d = float(sol.y_events[0][0][1])

    edge = 1e-9 * max(1.0, d)
    turns = sol.t_events[1]
    interior = turns[(turns > edge) & (turns < d - edge)]
    min_u, min_loc = 0.0, 0.0
    if interior.size:
        vals = sol.sol(interior)[0]
        j = int(np.argmin(vals))
        if vals[j] < min_u:
            min_u, min_loc = float(vals[j]), float(interior[j])

    def crossing(t, y):
        return y[0] - 1.0

    crossing.direction = 0.0
    later: Optional[int] = None
    try:
        sol2 = numerics.solve_ivp(rhs, (0.0, s), (0.0, max_depth),
                                  tol=1e-9, events=[crossing])
        later = int(np.sum(sol2.t_events[0] > d + 1e-9))
    except Exception:
        later = None

    grid = np.linspace(0.0, d, _PROFILE_NODES)
    u_samples = sol.sol(grid)[0].copy()
    u_samples[0] = 0.0

    return ShotStream(
        dist=dist,
        s=float(s),
        d=d,
        grid=grid,
        u_samples=u_samples,
        u_prime_d=u_prime_d,
        min_u=min_u,
        min_location=min_loc,
        sign_change=min_u < -10.0 * tol,
        unidirectional=interior.size == 0,
        later_crossings=later,
        r=(u_prime_d ** 2 + 2.0 * d) / 3.0,
        tolerance=tol,
        _dense=sol.sol,
    )
