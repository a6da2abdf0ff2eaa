"""Verdicts comparing sampled surface profiles against stream depths.

The depth bounds attached to a Bernoulli head (conjugate depths, the
zero-margin depth) constrain every admissible water wave with that head.
This module turns those constraints into executable checks on a sampled
surface: each inequality becomes a verdict record carrying the compared
values, so a report can be audited rather than trusted.

Sampled data cannot decide exact-arithmetic inequalities, so strict
comparisons carry a relative margin of 1e-10 and a profile is called
stream-like when its total variation falls below 1e-9 relative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import bernoulli
from .errors import ConfigError, DomainError
from .vorticity import VorticityDistribution

__all__ = ["VerdictRecord", "BoundsReport", "check_bounds", "check_prop3"]

HOLDS = "holds"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"

_STRICT_REL = 1e-10
_FLAT_REL = 1e-9


def _margin(lhs: float, rhs: float) -> float:
    vals = [1.0]
    for v in (lhs, rhs):
        if v is not None and math.isfinite(v):
            vals.append(abs(v))
    return _STRICT_REL * max(vals)


@dataclass(frozen=True)
class VerdictRecord:
    """One inequality verdict with the compared values attached.

    ``status`` is one of ``"holds"``, ``"violated"`` or
    ``"not-applicable"``; ``lhs``/``rhs`` are the binding comparison and
    ``margin`` the slack a strict inequality had to clear.
    """

    status: str
    lhs: Optional[float]
    rhs: Optional[float]
    margin: float
    note: str = ""

    def as_dict(self) -> dict:
        return {"status": self.status, "lhs": self.lhs, "rhs": self.rhs,
                "margin": self.margin}


def _strictly_above(lhs: float, rhs: float, note: str = "") -> VerdictRecord:
    m = _margin(lhs, rhs)
    status = HOLDS if lhs - rhs > m else VIOLATED
    return VerdictRecord(status=status, lhs=lhs, rhs=rhs, margin=m, note=note)


def _at_least(lhs: float, rhs: float, note: str = "") -> VerdictRecord:
    m = _margin(lhs, rhs)
    status = HOLDS if lhs - rhs > -m else VIOLATED
    return VerdictRecord(status=status, lhs=lhs, rhs=rhs, margin=m, note=note)


def _na(note: str) -> VerdictRecord:
    return VerdictRecord(status=NOT_APPLICABLE, lhs=None, rhs=None,
                         margin=0.0, note=note)


@dataclass(frozen=True)
class BoundsReport:
    """Every depth-bound verdict for one head and one sampled surface.

    ``eta_hat``/``eta_check`` are the sampled sup/inf; both are
    window-relative estimates when the samples cover less than a period.
    ``max_interior`` records whether the sampled maximum is attained away
    from the window ends (the strictness clause of the crest bound is
    informational only: attainment is not decidable from finite samples).
    """

    r: float
    condition: str
    eta_hat: float
    eta_check: float
    d_minus: Optional[float]
    d_plus: Optional[float]
    d_c: float
    d0: float
    r_c: float
    r0: Optional[float]
    stream_like: bool
    max_interior: bool
    assertion1: VerdictRecord
    assertion2: VerdictRecord
    nonexistence_iii: VerdictRecord
    prop3: VerdictRecord
    surrogates: Tuple[str, ...] = field(default=("positivity",))
    notes: Tuple[str, ...] = field(default=())

    def verdict_block(self) -> dict:
        """The four verdicts as one JSON-ready mapping."""
        return {
            "assertion1": self.assertion1.as_dict(),
            "assertion2": self.assertion2.as_dict(),
            "nonexistence_iii": self.nonexistence_iii.as_dict(),
            "prop3": self.prop3.as_dict(),
        }


def _checked_samples(eta) -> np.ndarray:
    arr = np.asarray(eta, dtype=float).ravel()
    if arr.size == 0:
        raise ConfigError("no surface samples given")
    if not np.all(np.isfinite(arr)):
        raise ConfigError("surface samples contain non-finite values")
    if np.min(arr) <= 0.0:
        raise DomainError(
            f"surface samples must be positive; minimum is {float(np.min(arr))!r}")
    return arr


def _prop3_record(analysis, r: float, eta_hat: float, eta_check: float,
                  stream_like: bool) -> VerdictRecord:
    if analysis.condition != "ii":
        return _na(f"requires classification \"ii\"; this distribution is "
                   f"\"{analysis.condition}\"")
    if analysis.r0 is None or r - analysis.r0 <= _margin(r, analysis.r0):
        return _na(f"requires r > r0; r={r!r}, r0={analysis.r0!r}")
    d0 = analysis.d0
    crest = _at_least(eta_hat, d0)
    trough = _strictly_above(d0, eta_check)
    note = "crest >= d0 and d0 > trough"
    if stream_like:
        note += "; samples are stream-like"
    if crest.status == VIOLATED:
        return VerdictRecord(status=VIOLATED, lhs=eta_hat, rhs=d0,
                             margin=crest.margin,
                             note="crest bound eta_hat >= d0 fails; " + note)
    if trough.status == VIOLATED:
        return VerdictRecord(status=VIOLATED, lhs=d0, rhs=eta_check,
                             margin=trough.margin,
                             note="trough bound d0 > eta_check fails; " + note)
    # report the tighter side of the sandwich
    if eta_hat - d0 <= d0 - eta_check:
        return VerdictRecord(status=HOLDS, lhs=eta_hat, rhs=d0,
                             margin=crest.margin, note=note)
    return VerdictRecord(status=HOLDS, lhs=d0, rhs=eta_check,
                         margin=trough.margin, note=note)


def check_prop3(dist: VorticityDistribution, r: float, eta) -> VerdictRecord:
    """Depth-d0 sandwich ``eta_hat >= d0 > eta_check`` on its own.

    Applicable only under classification "ii" with ``r > r0``; hypothesis
    failure is encoded as a not-applicable verdict, never an exception.
    """
    arr = _checked_samples(eta)
    eta_hat = float(np.max(arr))
    eta_check = float(np.min(arr))
    stream_like = (eta_hat - eta_check) < _FLAT_REL * max(1.0, eta_hat)
    return _prop3_record(bernoulli.analyze(dist), r, eta_hat, eta_check,
                         stream_like)


def check_bounds(dist: VorticityDistribution, r: float, eta) -> BoundsReport:
    """Evaluate every depth-bound verdict for head ``r`` and samples ``eta``.

    The two main assertions: (1) admissible waves need ``r > r_c`` and a
    surface strictly above the supercritical depth ``d_minus``; (2) a
    non-stream wave's crest reaches the subcritical depth ``d_plus`` while
    its trough stays strictly below.  Assertion (2) is skipped for
    stream-like samples (it addresses non-stream solutions) and outside
    its head window.  Under classification "iii" with ``r >= r0`` the
    admissible solutions are exactly the streams, so non-flat samples
    violate that clause by themselves.

    A head below the critical value is reported, not raised: that regime's
    content is precisely that no non-stream solution exists.
    """
    arr = _checked_samples(eta)
    if not (r > 0.0):
        raise DomainError(f"head must be positive; got r={r!r}")
    analysis = bernoulli.analyze(dist)
    eta_hat = float(np.max(arr))
    eta_check = float(np.min(arr))
    stream_like = (eta_hat - eta_check) < _FLAT_REL * max(1.0, eta_hat)
    hits = np.flatnonzero(arr == eta_hat)
    max_interior = bool(np.any((hits > 0) & (hits < arr.size - 1)))

    r_c, r0 = analysis.r_c, analysis.r0
    supercrit = _at_least(r, r_c).status == HOLDS
    d_plus = d_minus = None
    if supercrit:
        pair = bernoulli.conjugates(dist, r)
        d_plus, d_minus = pair.d_plus, pair.d_minus

    above_crit = _strictly_above(r, r_c)
    if above_crit.status == HOLDS and d_minus is not None:
        assertion1 = _strictly_above(
            eta_check, d_minus, note="min eta vs supercritical depth d_minus")
    else:
        assertion1 = VerdictRecord(
            status=VIOLATED, lhs=r, rhs=r_c, margin=above_crit.margin,
            note="head does not exceed the critical head r_c")

    in_window = (above_crit.status == HOLDS
                 and (r0 is None or _strictly_above(r0, r).status == HOLDS))
    if not in_window or d_plus is None:
        assertion2 = _na(f"requires r strictly between r_c={r_c!r} and "
                         f"r0={r0!r}")
    elif stream_like:
        assertion2 = _na("samples are stream-like; the assertion addresses "
                         "non-stream solutions")
    else:
        crest = _at_least(eta_hat, d_plus)
        trough = _strictly_above(d_plus, eta_check)
        note = "crest >= d_plus and d_plus > trough"
        if crest.status == VIOLATED:
            assertion2 = VerdictRecord(
                status=VIOLATED, lhs=eta_hat, rhs=d_plus, margin=crest.margin,
                note="crest bound eta_hat >= d_plus fails; " + note)
        elif trough.status == VIOLATED:
            assertion2 = VerdictRecord(
                status=VIOLATED, lhs=d_plus, rhs=eta_check,
                margin=trough.margin,
                note="trough bound d_plus > eta_check fails; " + note)
        elif eta_hat - d_plus <= d_plus - eta_check:
            assertion2 = VerdictRecord(status=HOLDS, lhs=eta_hat, rhs=d_plus,
                                       margin=crest.margin, note=note)
        else:
            assertion2 = VerdictRecord(status=HOLDS, lhs=d_plus,
                                       rhs=eta_check, margin=trough.margin,
                                       note=note)

    variation = eta_hat - eta_check
    flat_tol = _FLAT_REL * max(1.0, eta_hat)
    if (analysis.condition == "iii" and r0 is not None
            and _at_least(r, r0).status == HOLDS):
        nonexistence = VerdictRecord(
            status=HOLDS if stream_like else VIOLATED,
            lhs=variation, rhs=flat_tol, margin=0.0,
            note="every admissible solution at this head is a stream; "
                 "non-flat samples are inconsistent with that clause")
    else:
        nonexistence = _na(f"requires classification \"iii\" and r >= r0; "
                           f"condition=\"{analysis.condition}\", r0={r0!r}")

    prop3 = _prop3_record(analysis, r, eta_hat, eta_check, stream_like)

    notes = ["eta_hat and eta_check are estimates over the sampled window"]
    if (analysis.condition == "ii" and r0 is not None
            and _at_least(r, r0).status == HOLDS):
        notes.append("conjectured non-existence at this head; "
                     "reported informationally, not asserted")

    return BoundsReport(
        r=float(r),
        condition=analysis.condition,
        eta_hat=eta_hat,
        eta_check=eta_check,
        d_minus=d_minus,
        d_plus=d_plus,
        d_c=analysis.d_c,
        d0=analysis.d0,
        r_c=r_c,
        r0=r0,
        stream_like=stream_like,
        max_interior=max_interior,
        assertion1=assertion1,
        assertion2=assertion2,
        nonexistence_iii=nonexistence,
        prop3=prop3,
        notes=tuple(notes),
    )
