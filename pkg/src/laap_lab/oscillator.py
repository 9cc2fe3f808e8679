"""Dafermos oscillator x'' = g(x, x') and least-action choice of exit circle.

Outside the unit disk centred at (1, 0) every trajectory runs clockwise on
a circle through the origin,

    x = c cos(theta0 - t) + c,   x' = c sin(theta0 - t),

with c = (x**2 + x'**2) / (2 x) conserved.  At the origin g is undefined
and the motion may continue on any circle c >= 1; on the circle leaving
the origin at t = 0 (theta0 = pi) the Lagrangian is c - x = c cos t and
the action over [0, t1] is c sin t1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from laap_lab import kernels
from laap_lab.errors import (
    DomainError,
    IntegrationDomainError,
    RejectedInputError,
    UndefinedPointError,
)

ORIGIN_TOL = 1e-12
SWITCH_RADIUS = 1e-6
# near-origin step factor: h <= eta * r / |f|; see the switching integrator
NEAR_ORIGIN_ETA = 1e-3
MAX_DT = 1e-2


@dataclass(frozen=True)
class OscState:
    x: float
    xdot: float

    @property
    def on_exterior_branch(self) -> bool:
        return self.x > 0.0 and (self.x - 1.0) ** 2 + self.xdot**2 >= 1.0


@dataclass(frozen=True)
class CircleTrajectory:
    c: float
    theta0: float

    def __post_init__(self) -> None:
        if not self.c >= 1.0:
            raise RejectedInputError(f"exit circles need c >= 1, got {self.c!r}")

    def state(self, t: float) -> OscState:
        return exact_trajectory(self.c, self.theta0, t)


def g_rhs(s: OscState) -> float:
    """Acceleration g(x, x'); undefined at the origin and for x <= 0 outside the disk."""
    if math.hypot(s.x, s.xdot) <= ORIGIN_TOL:
        raise UndefinedPointError("g is not defined at the origin")
    if (s.x - 1.0) ** 2 + s.xdot**2 < 1.0:
        return 1.0 - s.x
    if s.x > 0.0:
        return (s.xdot**2 - s.x**2) / (2.0 * s.x)
    raise DomainError(f"g is not defined at x={s.x!r} outside the unit disk")


def exact_trajectory(c: float, theta0: float, t: float) -> OscState:
    half = 0.5 * (theta0 - t)
    # 2 c cos^2(phi/2) == c cos(phi) + c without cancellation near the origin
    return OscState(2.0 * c * math.cos(half) ** 2, c * math.sin(theta0 - t))


def conserved_quantity(s: OscState) -> float:
    """Circle parameter (x**2 + x'**2) / (2 x)."""
    if not s.x > 0.0:
        raise DomainError("conserved quantity needs x > 0")
    return (s.x**2 + s.xdot**2) / (2.0 * s.x)


def lagrangian(s: OscState) -> float:
    """x'**2 / (2 x) - x / 2 on the exterior branch."""
    if not s.x > 0.0:
        raise DomainError("Lagrangian needs x > 0")
    return s.xdot**2 / (2.0 * s.x) - 0.5 * s.x


def _check_t1(t1: float) -> None:
    if not 0.0 < t1 < math.pi:
        raise RejectedInputError(f"t1 must lie in (0, pi), got {t1!r}")


def action_exit_circle(c: float, t1: float) -> float:
    """Action on [0, t1] of the circle c leaving the origin at t = 0."""
    _check_t1(t1)
    if not c >= 1.0:
        raise RejectedInputError(f"exit circles need c >= 1, got {c!r}")
    return c * math.sin(math.pi - t1)


def select_exit_circle(t1: float, candidates: Iterable[float]) -> float:
    """Least-action exit circle among ``candidates``; ties go to the smaller c."""
    _check_t1(t1)
    cands = [float(c) for c in candidates]
    if not cands:
        raise RejectedInputError("no candidate circles")
    return min(cands, key=lambda c: (action_exit_circle(c, t1), c))


@dataclass(frozen=True)
class OscTrajectory:
    t: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    switch_times: np.ndarray
    switch_c: float

    def __len__(self) -> int:
        return len(self.t)

    def states(self) -> list[OscState]:
        return [OscState(float(a), float(b)) for a, b in zip(self.x, self.xdot)]


def integrate_with_switching(
    initial: OscState,
    dt: float,
    t_end: float,
    switch_c: float,
    t0: float = 0.0,
    delta: float = SWITCH_RADIUS,
    eta: float = NEAR_ORIGIN_ETA,
) -> OscTrajectory:
    """Fixed-step RK4 with re-seeding at the origin.

    Away from the origin the step is ``dt``.  Close to it the field is
    singular, so the step is cut to ``eta * r / |f|``.  Once the state is
    within ``delta`` of the origin a switch is recorded, a sample (t_s, 0, 0)
    is emitted, and integration resumes on the exact circle ``switch_c``
    leaving the origin at t_s.
    """
    if not 0.0 < dt <= MAX_DT:
        raise RejectedInputError(f"dt must lie in (0, {MAX_DT}], got {dt!r}")
    if not switch_c >= 1.0:
        raise RejectedInputError(f"switch_c must be >= 1, got {switch_c!r}")
    if not t_end >= t0:
        raise RejectedInputError("t_end precedes t0")
    if not initial.on_exterior_branch:
        raise RejectedInputError("initial state must lie on the exterior branch")
    t, x, v, sw, status = kernels.integrate_switching(
        float(initial.x), float(initial.xdot), float(t0), float(dt), float(t_end),
        float(switch_c), float(delta), float(eta),
    )
    if status == kernels.STATUS_SINGULAR_START:
        raise RejectedInputError("initial state is inside the switching ball")
    if status == kernels.STATUS_LEFT_DOMAIN:
        raise IntegrationDomainError(f"trajectory left x > 0 near t={t[-1]!r}")
    return OscTrajectory(t, x, v, sw, float(switch_c))


def trajectory_action(traj: OscTrajectory, t_start: float, t_stop: float, c: float) -> float:
    """Trapezoid-rule action of ``traj`` over [t_start, t_stop].

    Samples essentially at the origin use the on-circle limit L = c - x.
    The value at ``t_stop`` is linearly interpolated when it is not a sample.
    """
    t, x, v = traj.t, traj.x, traj.xdot
    if not (t[0] <= t_start < t_stop <= t[-1]):
        raise RejectedInputError("action window outside the sampled range")
    near = x <= 1e-6 * c
    safe_x = np.where(near, 1.0, x)
    L = np.where(near, c - x, v * v / (2.0 * safe_x) - 0.5 * x)
    lo = np.searchsorted(t, t_start, side="left")
    hi = np.searchsorted(t, t_stop, side="right")
    ts = t[lo:hi]
    Ls = L[lo:hi]
    if ts[0] > t_start:
        ts = np.concatenate(([t_start], ts))
        Ls = np.concatenate(([np.interp(t_start, t, L)], Ls))
    if ts[-1] < t_stop:
        ts = np.concatenate((ts, [t_stop]))
        Ls = np.concatenate((Ls, [np.interp(t_stop, t, L)]))
    return float(np.trapezoid(Ls, ts))
