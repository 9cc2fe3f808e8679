"""Scalar calculus of kinetic-energy profiles chi(t) for wild Euler solutions.

A profile is admissible for constants (C1, C2), obstruction lambda(t) and
dimension n when

    chi'(t) <= -C1 chi**0.5 - C2 chi**1.5,    chi(t) > n lambda(t),

checked on samples with forward differences and a slack of 1e-10.  The
total energy, its dissipation rate and the action reduce to

    E(t) = chi(t) meas / 2 + B,   D(t) = chi'(t) meas / 2,
    A(Tbar) = meas / 2 * int_0^Tbar chi - Tbar B,

with ``meas`` the measure of the mixing zone and ``B`` the background
internal energy.

Every admissible chi with chi(0) > 0 is beaten, under both the entropy-rate
and the least-action criterion, by a steeper profile built from larger
constants; see :func:`entropy_rate_dominate` and :func:`laap_verdict_aw`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from laap_lab import kernels
from laap_lab.errors import (
    CannotDominateError,
    InternalConsistencyError,
    RejectedInputError,
)

SLOPE_SLACK = 1e-10
GRID_FRACTION = 1e-4
# relative tolerance for "t is inside the sampled range"
_RANGE_RTOL = 1e-12

LambdaLike = Union[None, float, Callable[[np.ndarray], np.ndarray], Sequence[float], np.ndarray]


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ChiProfile:
    """Sampled chi(t) with its constants and domain scalars.

    ``times`` starts at 0 and increases strictly; ``lam`` holds the
    obstruction on the same grid.
    """

    times: np.ndarray
    values: np.ndarray
    c1: float
    c2: float
    lam: np.ndarray = field(default=None)  # type: ignore[assignment]
    n: int = 2
    meas_omega_prime: float = 1.0
    background_internal: float = 0.0

    def __post_init__(self) -> None:
        t = _frozen(self.times)
        v = _frozen(self.values)
        if t.ndim != 1 or t.shape != v.shape or t.size == 0:
            raise RejectedInputError("times and values must be 1-D arrays of equal, non-zero length")
        if t[0] != 0.0:
            raise RejectedInputError("profiles start at t = 0")
        if t.size > 1 and not np.all(np.diff(t) > 0.0):
            raise RejectedInputError("times must increase strictly")
        if not (np.all(np.isfinite(v)) and np.all(v >= 0.0)):
            raise RejectedInputError("chi must be finite and non-negative")
        lam = np.zeros_like(t) if self.lam is None else np.broadcast_to(np.asarray(self.lam, float), t.shape)
        lam = _frozen(lam)
        if not np.all(lam >= 0.0):
            raise RejectedInputError("lambda must be non-negative")
        if not (self.c1 > 0.0 and self.c2 >= 0.0):
            raise RejectedInputError("constants need c1 > 0 and c2 >= 0")
        if int(self.n) != self.n or self.n < 2:
            raise RejectedInputError("space dimension n must be an integer >= 2")
        if not self.meas_omega_prime > 0.0:
            raise RejectedInputError("meas_omega_prime must be positive")
        if not math.isfinite(self.background_internal):
            raise RejectedInputError("background_internal must be finite")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "c1", float(self.c1))
        object.__setattr__(self, "c2", float(self.c2))
        object.__setattr__(self, "n", int(self.n))

    @property
    def chi0(self) -> float:
        return float(self.values[0])

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def __len__(self) -> int:
        return len(self.times)

    def chi(self, t: float) -> float:
        """Linear interpolant of the samples."""
        _check_in_range(self, t)
        return float(np.interp(t, self.times, self.values))


def _check_in_range(p: ChiProfile, t: float) -> None:
    tol = _RANGE_RTOL * max(1.0, p.t_end)
    if not (-tol <= t <= p.t_end + tol):
        raise RejectedInputError(f"t={t!r} outside the sampled range [0, {p.t_end!r}]")


def _lambda_on(lam: LambdaLike, t: np.ndarray) -> np.ndarray:
    if lam is None:
        return np.zeros_like(t)
    if callable(lam):
        return np.broadcast_to(np.asarray(lam(t), dtype=float), t.shape).copy()
    arr = np.asarray(lam, dtype=float)
    if arr.ndim == 0:
        return np.full_like(t, float(arr))
    if arr.shape != t.shape:
        raise RejectedInputError("sampled lambda does not match the time grid")
    return arr


# ---------------------------------------------------------------------------
# dominating solution


def vanishing_time(chi0: float, c1: float) -> float:
    """t* = 2 chi0**0.5 / C1."""
    if not chi0 >= 0.0:
        raise RejectedInputError("chi0 must be >= 0")
    if not c1 > 0.0:
        raise RejectedInputError("c1 must be positive")
    return 2.0 * math.sqrt(chi0) / c1


def dominating_value(t, sqrt_chi0, c1):
    """max(sqrt_chi0 - C1 t / 2, 0)**2 in the arithmetic of the arguments.

    Taking the square root of chi(0) as input keeps the formula exact for
    rational arguments (e.g. ``fractions.Fraction``).
    """
    d = sqrt_chi0 - c1 * t / 2
    return d * d if d > 0 else d * 0


def dominating_profile(
    chi0: float,
    c1: float,
    grid: Sequence[float] | np.ndarray | None = None,
    *,
    c2: float = 0.0,
    lam: LambdaLike = None,
    n: int = 2,
    meas_omega_prime: float = 1.0,
    background_internal: float = 0.0,
) -> ChiProfile:
    """Closed-form solution of chi' = -C1 chi**0.5 from chi0.

    Values are exactly zero from t* = 2 chi0**0.5 / C1 on.  The default grid
    covers [0, t*] with spacing 1e-4 t* (or [0, 1] when chi0 = 0).
    """
    t_star = vanishing_time(chi0, c1)
    if grid is None:
        grid = np.linspace(0.0, t_star if t_star > 0.0 else 1.0, int(round(1.0 / GRID_FRACTION)) + 1)
    t = np.asarray(grid, dtype=float)
    d = math.sqrt(chi0) - 0.5 * c1 * t
    values = np.where(t >= t_star, 0.0, d * d)
    return ChiProfile(
        t, values, c1, c2, _lambda_on(lam, t), n, meas_omega_prime, background_internal
    )


# ---------------------------------------------------------------------------
# explicit stepping


def stepped_profile(
    chi0: float,
    c1: float,
    c2: float,
    *,
    rate_c1: float | None = None,
    rate_c2: float | None = None,
    dt: float | None = None,
    t_end: float | None = None,
    lam: LambdaLike = None,
    n: int = 2,
    meas_omega_prime: float = 1.0,
    background_internal: float = 0.0,
) -> ChiProfile:
    """Explicit-Euler profile for chi' = -a chi**0.5 - b chi**1.5.

    ``(a, b)`` default to the declared constants ``(c1, c2)``; larger rates
    give steeper profiles that remain admissible for ``(c1, c2)``.  The
    result is cut at the first sample with chi <= n lambda, so it ends
    before chi reaches zero.
    """
    a = c1 if rate_c1 is None else rate_c1
    b = c2 if rate_c2 is None else rate_c2
    if not chi0 > 0.0:
        raise RejectedInputError("stepping needs chi0 > 0")
    if not (a >= c1 and b >= c2):
        raise RejectedInputError("rate constants must not be smaller than the declared ones")
    t_star = vanishing_time(chi0, c1)
    if dt is None:
        dt = GRID_FRACTION * t_star
    if not dt > 0.0:
        raise RejectedInputError("dt must be positive")
    horizon = t_star if t_end is None else min(t_end, t_star)
    n_max = int(math.floor(horizon / dt * (1.0 + 1e-12))) + 2
    values = kernels.chi_euler(float(chi0), float(a), float(b), float(dt), n_max)
    t = dt * np.arange(values.size)
    if t_end is not None:
        keep = t <= t_end * (1.0 + 1e-12)
        t, values = t[keep], values[keep]
    nl = n * _lambda_on(lam, t)
    bad = np.flatnonzero(~(values > nl))
    m = values.size if bad.size == 0 else int(bad[0])
    if m == 0:
        raise RejectedInputError("chi0 does not exceed n * lambda(0)")
    return ChiProfile(
        t[:m], values[:m], c1, c2, nl[:m] / n, n, meas_omega_prime, background_internal
    )


# ---------------------------------------------------------------------------
# admissibility, energy, dissipation, action


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    violation_time: float | None = None
    violation_index: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.admissible


def check_admissible(
    p: ChiProfile,
    interval: tuple[float, float] | None = None,
    *,
    c1: float | None = None,
    c2: float | None = None,
) -> Admissibility:
    """Discrete admissibility of ``p`` on ``interval`` (default: all samples).

    The slope test uses forward differences between consecutive samples
    inside the interval.  ``c1``/``c2`` override the profile's constants.
    """
    a, b = (0.0, p.t_end) if interval is None else interval
    if not a <= b:
        raise RejectedInputError("interval must satisfy a <= b")
    _check_in_range(p, a)
    _check_in_range(p, b)
    tol = _RANGE_RTOL * max(1.0, p.t_end)
    sel = np.flatnonzero((p.times >= a - tol) & (p.times <= b + tol))
    if sel.size == 0:
        raise RejectedInputError("no samples inside the interval")
    lo, hi = int(sel[0]), int(sel[-1]) + 1
    k, kind = kernels.chi_first_violation(
        np.ascontiguousarray(p.values[lo:hi]),
        np.ascontiguousarray(p.times[lo:hi]),
        float(p.c1 if c1 is None else c1),
        float(p.c2 if c2 is None else c2),
        np.ascontiguousarray(p.n * p.lam[lo:hi]),
        SLOPE_SLACK,
    )
    if kind == 0:
        return Admissibility(True)
    idx = lo + int(k)
    reason = "chi <= n lambda" if kind == 1 else "slope above -C1 chi^1/2 - C2 chi^3/2"
    return Admissibility(False, float(p.times[idx]), idx, reason)


def total_energy(p: ChiProfile, t: float) -> float:
    """chi(t) meas / 2 + background."""
    return 0.5 * p.meas_omega_prime * p.chi(t) + p.background_internal


def dissipation_rate(p: ChiProfile, t: float) -> float:
    """chi'(t) meas / 2 with chi' the right derivative of the interpolant.

    At the last sample the backward difference is used.
    """
    _check_in_range(p, t)
    if len(p) < 2:
        raise RejectedInputError("the dissipation rate needs at least two samples")
    k = int(np.searchsorted(p.times, t, side="right")) - 1
    k = min(max(k, 0), len(p) - 2)
    slope = (p.values[k + 1] - p.values[k]) / (p.times[k + 1] - p.times[k])
    return 0.5 * float(slope) * p.meas_omega_prime


def _integral(p: ChiProfile, t_bar: float) -> float:
    k = int(np.searchsorted(p.times, t_bar, side="right"))
    ts = p.times[:k]
    vs = p.values[:k]
    if ts[-1] < t_bar:
        ts = np.append(ts, t_bar)
        vs = np.append(vs, np.interp(t_bar, p.times, p.values))
    return float(np.trapezoid(vs, ts)) if ts.size > 1 else 0.0


def aw_action(p: ChiProfile, t_bar: float) -> float:
    """meas / 2 * int_0^Tbar chi - Tbar * background (trapezoid rule)."""
    if not t_bar >= 0.0:
        raise RejectedInputError("T_bar must be >= 0")
    _check_in_range(p, t_bar)
    t_bar = min(t_bar, p.t_end)
    return 0.5 * _integral(p, t_bar) * p.meas_omega_prime - t_bar * p.background_internal


# ---------------------------------------------------------------------------
# dominance


def _euler_refinement(p: ChiProfile, delta: float) -> ChiProfile:
    lam_p = p.lam
    return stepped_profile(
        p.chi0,
        p.c1,
        p.c2,
        rate_c1=p.c1 + delta,
        rate_c2=p.c2 + delta,
        dt=float(p.times[1] - p.times[0]),
        t_end=p.t_end,
        lam=lambda t: np.interp(t, p.times, lam_p),
        n=p.n,
        meas_omega_prime=p.meas_omega_prime,
        background_internal=p.background_internal,
    )


def _guarded_refinement(p: ChiProfile, delta: float) -> ChiProfile:
    """Step on the grid of ``p``, never above p's own increments minus a margin.

    Each increment is the smaller of the (C1 + delta, C2 + delta) Euler
    increment and the increment of ``p`` reduced by
    delta dt (chi**0.5 + chi**1.5).  The first keeps the slope bound, the
    second keeps the result strictly below ``p``.
    """
    a, b = p.c1 + delta, p.c2 + delta
    t, chi, nl = p.times, p.values, p.n * p.lam
    out = [p.chi0]
    c = p.chi0
    for k in range(len(p) - 1):
        h = t[k + 1] - t[k]
        sq = math.sqrt(c)
        step_own = -h * (a * sq + b * c * sq)
        step_p = (chi[k + 1] - chi[k]) - delta * h * (sq + c * sq)
        c = c + min(step_own, step_p)
        if not c > nl[k + 1]:
            break
        out.append(c)
    m = len(out)
    return ChiProfile(
        t[:m], out, p.c1, p.c2, p.lam[:m], p.n, p.meas_omega_prime, p.background_internal
    )


def _refinement_failure(refined: ChiProfile, p: ChiProfile) -> str:
    if len(refined) < 2:
        return "the refined profile has a single sample"
    if not check_admissible(refined):
        return "refined profile is not admissible for the original constants"
    if not dissipation_rate(refined, 0.0) < dissipation_rate(p, 0.0):
        return "refined profile does not dissipate faster at t = 0"
    t_common = refined.t_end
    if not aw_action(refined, t_common) < aw_action(p, t_common):
        return "refined profile does not lower the action"
    return ""


def entropy_rate_dominate(p: ChiProfile, delta: float) -> ChiProfile:
    """Steeper admissible profile from the same chi(0).

    Steps chi' = -(C1 + delta) chi**0.5 - (C2 + delta) chi**1.5 on the
    spacing of ``p`` and keeps the part where chi > n lambda and the grid
    of ``p`` reaches.  If ``p`` itself decays faster than its constants
    require, that profile need not beat it; the increments are then also
    capped by those of ``p`` minus delta dt (chi**0.5 + chi**1.5).

    The result carries the original constants.  Its admissibility, a lower
    D(0) and a lower action on the common interval are checked before
    returning.

    Raises
    ------
    CannotDominateError
        chi(0) = 0.
    InternalConsistencyError
        A post-condition fails.
    """
    if not delta > 0.0:
        raise RejectedInputError("delta must be positive")
    if not p.chi0 > 0.0:
        raise CannotDominateError("the zero profile cannot be dominated")
    if len(p) < 2:
        raise RejectedInputError("profile needs at least two samples")
    refined = _euler_refinement(p, delta)
    if _refinement_failure(refined, p):
        refined = _guarded_refinement(p, delta)
        if len(refined) < 2:
            raise RejectedInputError("grid too coarse: the refined profile has a single sample")
    why = _refinement_failure(refined, p)
    if why:
        raise InternalConsistencyError(why)
    return refined


@dataclass(frozen=True)
class Dominance:
    index: int
    refined: ChiProfile
    t_common: float
    action: float
    refined_action: float
    rate0: float
    refined_rate0: float


ZERO_PROFILE_NOTE = (
    "the infimum of the action over admissible profiles is attained only by chi = 0, "
    "i.e. m = 0, which solves the initial value problem only when m0 = 0"
)


@dataclass(frozen=True)
class AWVerdict:
    best_index: int
    actions: tuple[float, ...]
    infimum_is_zero_profile: bool
    note: str
    dominance: tuple[Dominance, ...]

    @property
    def minimizer_exists(self) -> bool:
        """True only when every candidate is already the zero profile."""
        return not self.dominance


def laap_verdict_aw(profiles: Sequence[ChiProfile], t_bar: float, delta: float = 0.1) -> AWVerdict:
    """Least-action verdict over a family of profiles on [0, T_bar].

    Reports the action-minimal candidate (first on ties) and, for every
    candidate with chi(0) > 0, a refinement with strictly smaller action.
    """
    profiles = list(profiles)
    if not profiles:
        raise RejectedInputError("no candidate profiles")
    actions = tuple(aw_action(p, t_bar) for p in profiles)
    best = min(range(len(actions)), key=lambda i: actions[i])
    dom = []
    for i, p in enumerate(profiles):
        if p.chi0 == 0.0:
            continue
        r = entropy_rate_dominate(p, delta)
        tc = min(t_bar, r.t_end)
        dom.append(
            Dominance(
                i, r, tc, aw_action(p, tc), aw_action(r, tc),
                dissipation_rate(p, 0.0), dissipation_rate(r, 0.0),
            )
        )
    return AWVerdict(best, actions, True, ZERO_PROFILE_NOTE, tuple(dom))
