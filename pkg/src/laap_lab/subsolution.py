"""Fan sub-solutions for the Riemann problem.

A fan sub-solution is piecewise constant on the wedges

    P-  : x2 < nu_minus t
    P1  : nu_minus t < x2 < nu_plus t
    P+  : x2 > nu_plus t

with the outer wedges carrying the Riemann states and the middle wedge the
constants (rho1, v1, u1, C).  Outer states have no x1-velocity, so the x1
momentum jumps force v1 = (0, beta) and u1 = diag(g11, -g11).  The four
remaining jump conditions are solved for (beta, g11, nu_minus, nu_plus) at
given (rho1, C).

The kinetic constant C is supplied by a closure rule.  ``FixedC`` injects a
value (for instance one taken from an external construction); ``MinC``
searches for the smallest C that keeps the matrix inequality strict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from laap_lab.errors import InfeasibleClosureError, RejectedInputError
from laap_lab.riemann import RiemannData, TwoShockSolution, solve_middle_state

NEWTON_MAX_ITER = 100
NEWTON_TOL = 1e-10
BISECTION_ITERS = 60


@dataclass(frozen=True)
class TraceFreeSym2:
    """Symmetric trace-free 2x2 matrix [[g11, g12], [g12, -g11]]."""

    g11: float
    g12: float

    @property
    def g22(self) -> float:
        return -self.g11

    def matrix(self) -> np.ndarray:
        return np.array([[self.g11, self.g12], [self.g12, -self.g11]])


def u_from_v(v: Sequence[float]) -> TraceFreeSym2:
    """v (x) v - |v|^2/2 Id."""
    va, vb = float(v[0]), float(v[1])
    return TraceFreeSym2(0.5 * (va * va - vb * vb), va * vb)


def admissibility_gap(v1: Sequence[float], u1: TraceFreeSym2, C: float) -> float:
    """Smallest eigenvalue of (C/2) Id - (v1 (x) v1 - u1).

    The sub-solution inequality is strict iff the result is positive.
    """
    va, vb = float(v1[0]), float(v1[1])
    a = 0.5 * C - (va * va - u1.g11)
    d = 0.5 * C - (vb * vb + u1.g11)
    b = -(va * vb - u1.g12)
    return 0.5 * (a + d) - math.hypot(0.5 * (a - d), b)


@dataclass(frozen=True)
class FixedC:
    """Closure with a prescribed kinetic constant."""

    C: float

    @property
    def label(self) -> str:
        return f"fixed:{self.C:.9g}"


@dataclass(frozen=True)
class MinC:
    """Closure picking the smallest C whose admissibility gap exceeds gap_tol."""

    gap_tol: float = 1e-9
    max_doublings: int = 64

    @property
    def label(self) -> str:
        return "min-c"


ClosureRule = Union[FixedC, MinC]


@dataclass(frozen=True)
class FanSubsolution:
    rho1: float
    v1_a: float
    v1_b: float
    u1: TraceFreeSym2
    C: float
    nu_minus: float
    nu_plus: float
    data: RiemannData
    closure_label: str = ""

    @property
    def v1(self) -> tuple[float, float]:
        return (self.v1_a, self.v1_b)

    @property
    def gap(self) -> float:
        return admissibility_gap(self.v1, self.u1, self.C)

    @property
    def is_strict(self) -> bool:
        return self.gap > 0.0

    def residuals(self) -> tuple[float, float, float, float]:
        return subsolution_residuals(self)


def _middle_flux(rho1: float, g11: float, C: float, law) -> float:
    """x2x2 momentum flux inside P1: rho1 u22 + p(rho1) + C rho1 / 2."""
    return rho1 * (-g11) + law.pressure(rho1) + 0.5 * C * rho1


def _residual_vector(data: RiemannData, rho1: float, C: float, x: np.ndarray) -> np.ndarray:
    beta, g11, nm, npl = x
    law = data.law
    rm, vm = data.rho_minus, data.vb_minus
    rp, vp = data.rho_plus, data.vb_plus
    flux1 = _middle_flux(rho1, g11, C, law)
    return np.array(
        [
            nm * (rm - rho1) - (rm * vm - rho1 * beta),
            nm * (rm * vm - rho1 * beta) - ((rm * vm * vm + law.pressure(rm)) - flux1),
            npl * (rho1 - rp) - (rho1 * beta - rp * vp),
            npl * (rho1 * beta - rp * vp) - (flux1 - (rp * vp * vp + law.pressure(rp))),
        ]
    )


def _jacobian(data: RiemannData, rho1: float, x: np.ndarray) -> np.ndarray:
    beta, _, nm, npl = x
    rm, vm = data.rho_minus, data.vb_minus
    rp, vp = data.rho_plus, data.vb_plus
    return np.array(
        [
            [rho1, 0.0, rm - rho1, 0.0],
            [-nm * rho1, -rho1, rm * vm - rho1 * beta, 0.0],
            [-rho1, 0.0, 0.0, rho1 - rp],
            [npl * rho1, rho1, 0.0, rho1 * beta - rp * vp],
        ]
    )


def subsolution_residuals(s: FanSubsolution) -> tuple[float, float, float, float]:
    """Jump residuals (R1..R4) of the piecewise-constant fan.

    R1/R3 are the mass jumps across x2 = nu_minus t and x2 = nu_plus t,
    R2/R4 the x2-momentum jumps.  The outer wedges use the ordinary Euler
    flux rho v (x) v + p Id.
    """
    if s.v1_a != 0.0 or s.u1.g12 != 0.0:
        raise RejectedInputError("fan requires v1 = (0, beta) and u1 diagonal")
    r = _residual_vector(s.data, s.rho1, s.C, np.array([s.v1_b, s.u1.g11, s.nu_minus, s.nu_plus]))
    return (float(r[0]), float(r[1]), float(r[2]), float(r[3]))


def _flux_scale(data: RiemannData) -> float:
    law = data.law
    return max(
        1.0,
        data.rho_minus * data.vb_minus**2 + law.pressure(data.rho_minus),
        data.rho_plus * data.vb_plus**2 + law.pressure(data.rho_plus),
    )


def _newton(data: RiemannData, rho1: float, C: float, x0: np.ndarray) -> np.ndarray:
    """Newton on R1..R4 with step halving on the residual norm."""
    # absolute tolerance, floored at round-off level of the largest flux
    tol = max(NEWTON_TOL, 64.0 * np.finfo(float).eps * _flux_scale(data))
    x = np.array(x0, dtype=float)
    r = _residual_vector(data, rho1, C, x)
    for _ in range(NEWTON_MAX_ITER):
        if np.max(np.abs(r)) <= tol:
            return x
        try:
            step = np.linalg.solve(_jacobian(data, rho1, x), -r)
        except np.linalg.LinAlgError as exc:
            raise InfeasibleClosureError(f"singular fan Jacobian at rho1={rho1!r}") from exc
        norm0 = np.linalg.norm(r)
        lam = 1.0
        for _ in range(40):
            x_try = x + lam * step
            r_try = _residual_vector(data, rho1, C, x_try)
            if np.linalg.norm(r_try) < norm0:
                break
            lam *= 0.5
        else:
            raise InfeasibleClosureError("Newton line search stalled")
        x, r = x_try, r_try
    if np.max(np.abs(r)) <= tol:
        return x
    raise InfeasibleClosureError(f"Newton did not converge at rho1={rho1!r}, C={C!r}")


def _seed(ts: TwoShockSolution, C: float) -> np.ndarray:
    # At rho1 = rho_m the effective flux ratio equals v_m**2, hence g11 = C/2 - v_m**2.
    return np.array([ts.v_m, 0.5 * C - ts.v_m**2, ts.nu_minus, ts.nu_plus])


def _build(data, rho1, C, x, label) -> FanSubsolution:
    beta, g11, nm, npl = (float(v) for v in x)
    return FanSubsolution(rho1, 0.0, beta, TraceFreeSym2(g11, 0.0), C, nm, npl, data, label)


def solve_fan(
    data: RiemannData,
    rho1: float,
    closure: ClosureRule | None = None,
    two_shock: TwoShockSolution | None = None,
) -> FanSubsolution:
    """Fan sub-solution with middle density ``rho1`` under ``closure``.

    ``rho1`` must lie in [max(rho+-), rho_m].  With ``FixedC`` the result is
    returned whatever its admissibility gap (check ``is_strict``); with
    ``MinC`` it is guaranteed to have gap > ``gap_tol`` and C >= v_m**2.

    Raises
    ------
    RejectedInputError
        ``rho1`` outside the admissible range.
    InfeasibleClosureError
        Newton failure, or no C meets the ``MinC`` requirement.
    """
    closure = MinC() if closure is None else closure
    ts = solve_middle_state(data) if two_shock is None else two_shock
    lo = max(data.rho_minus, data.rho_plus)
    if not lo <= rho1 <= ts.rho_m * (1.0 + 1e-12):
        raise RejectedInputError(f"rho1={rho1!r} outside [{lo!r}, {ts.rho_m!r}]")

    if isinstance(closure, FixedC):
        x = _newton(data, rho1, closure.C, _seed(ts, closure.C))
        s = _build(data, rho1, closure.C, x, closure.label)
        if not s.nu_minus < s.nu_plus:
            raise InfeasibleClosureError("fan speeds out of order")
        return s

    if not isinstance(closure, MinC):
        raise RejectedInputError(f"unknown closure {closure!r}")

    c_lo = ts.v_m**2
    x_last = _seed(ts, c_lo)

    def feasible(C: float):
        nonlocal x_last
        try:
            x = _newton(data, rho1, C, x_last)
        except InfeasibleClosureError:
            return None
        x_last = x
        s = _build(data, rho1, C, x, closure.label)
        if s.nu_minus < s.nu_plus and s.gap > closure.gap_tol:
            return s
        return None

    width = 1.0
    best = feasible(c_lo + width)
    k = 0
    while best is None:
        width *= 2.0
        k += 1
        if k > closure.max_doublings:
            raise InfeasibleClosureError(f"no admissible C found at rho1={rho1!r}")
        best = feasible(c_lo + width)

    a, b = c_lo, c_lo + width
    for _ in range(BISECTION_ITERS):
        mid = 0.5 * (a + b)
        s = feasible(mid)
        if s is None:
            a = mid
        else:
            b, best = mid, s
    return best


def ci_kinetic_energy_density(s: FanSubsolution) -> float:
    """Kinetic energy density rho1 C / 2 of every solution built on ``s`` inside P1."""
    return 0.5 * s.rho1 * s.C
