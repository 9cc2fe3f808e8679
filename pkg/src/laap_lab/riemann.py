"""Two-shock solution of the planar barotropic Riemann problem.

The interface is the line x2 = 0.  Both outer states move along x2 only
(v_a = 0), so the problem reduces to the 1-D system in (rho, v_b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.optimize import brentq

from laap_lab.eos import PressureLaw
from laap_lab.errors import (
    InternalConsistencyError,
    NoTwoShockError,
    RejectedInputError,
)

State = tuple[float, float]
"""A (rho, v_b) pair."""

_BRACKET_CAP = 1e6
_ROOT_TOL = 1e-10
_VM_AGREEMENT = 1e-8


@dataclass(frozen=True)
class RiemannData:
    rho_minus: float
    vb_minus: float
    rho_plus: float
    vb_plus: float
    law: PressureLaw = field(default_factory=PressureLaw)

    def __post_init__(self) -> None:
        for name in ("rho_minus", "vb_minus", "rho_plus", "vb_plus"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.rho_minus > 0.0 and self.rho_plus > 0.0):
            raise RejectedInputError("Riemann densities must be positive")
        for v in (self.vb_minus, self.vb_plus):
            if not math.isfinite(v):
                raise RejectedInputError("Riemann velocities must be finite")

    @property
    def left(self) -> State:
        return (self.rho_minus, self.vb_minus)

    @property
    def right(self) -> State:
        return (self.rho_plus, self.vb_plus)

    def shifted(self, s: float) -> RiemannData:
        """Same data seen from a frame moving with speed -s along x2."""
        return RiemannData(self.rho_minus, self.vb_minus + s, self.rho_plus, self.vb_plus + s, self.law)


@dataclass(frozen=True)
class TwoShockSolution:
    rho_m: float
    v_m: float
    nu_minus: float
    nu_plus: float

    @property
    def middle(self) -> State:
        return (self.rho_m, self.v_m)


@dataclass(frozen=True)
class TwoShockCondition:
    """Outcome of the data-only two-shock test.

    ``radicand`` is (rho+ - rho-)(p+ - p-)/(rho+ rho-), ``jump`` is
    vb+ - vb-.  Both displayed inequalities must hold.
    """

    satisfied: bool
    radicand: float
    jump: float
    bound: float
    jump_squared: float

    def __bool__(self) -> bool:
        return bool(self.satisfied)


def _hugoniot_gap(law: PressureLaw, rho: float, rho0: float) -> float:
    """sqrt((rho - rho0)(p(rho) - p(rho0)) / (rho rho0)) for rho >= rho0."""
    val = (rho - rho0) * (law.pressure(rho) - law.pressure(rho0)) / (rho * rho0)
    return math.sqrt(max(val, 0.0))


def check_two_shock_conditions(data: RiemannData) -> TwoShockCondition:
    law = data.law
    rm, rp = data.rho_minus, data.rho_plus
    radicand = (rp - rm) * (law.pressure(rp) - law.pressure(rm)) / (rp * rm)
    if radicand < -1e-12 * max(1.0, law.pressure(rm), law.pressure(rp)):
        raise InternalConsistencyError(f"negative two-shock radicand {radicand!r}")
    radicand = max(radicand, 0.0)
    jump = data.vb_plus - data.vb_minus
    bound = -math.sqrt(radicand)
    ok = jump < bound and jump * jump > radicand
    return TwoShockCondition(bool(ok), radicand, jump, bound, jump * jump)


def middle_state_residual(data: RiemannData, rho: float) -> float:
    """F(rho): sum of the two Hugoniot velocity jumps minus (vb- - vb+)."""
    law = data.law
    return (
        _hugoniot_gap(law, rho, data.rho_minus)
        + _hugoniot_gap(law, rho, data.rho_plus)
        - (data.vb_minus - data.vb_plus)
    )


def solve_middle_state(data: RiemannData) -> TwoShockSolution:
    """Solve for the middle state and both shock speeds.

    The middle density is the root of the monotone residual
    :func:`middle_state_residual` on (max(rho+-), inf).  Speeds come from
    the mass jumps; the momentum jumps are then checked.

    Raises
    ------
    RejectedInputError
        If the data fail :func:`check_two_shock_conditions`.
    NoTwoShockError
        If no sign change is found below 1e6 * max(rho+-).
    """
    if not check_two_shock_conditions(data):
        raise RejectedInputError("Riemann data do not satisfy the two-shock condition")
    law = data.law
    rho_max = max(data.rho_minus, data.rho_plus)
    lo = rho_max * (1.0 + 1e-12)
    f_lo = middle_state_residual(data, lo)
    if f_lo >= 0.0:
        raise NoTwoShockError("residual is non-negative at the lower bracket end")
    hi = 2.0 * rho_max
    while middle_state_residual(data, hi) <= 0.0:
        hi *= 2.0
        if hi > _BRACKET_CAP * rho_max:
            raise NoTwoShockError("no bracket for the middle density")

    rho_m = brentq(lambda r: middle_state_residual(data, r), lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)
    dv = data.vb_minus - data.vb_plus
    if abs(middle_state_residual(data, rho_m)) > _ROOT_TOL * max(1.0, dv):
        raise InternalConsistencyError("middle-state root did not reach tolerance")

    v_m = data.vb_minus - _hugoniot_gap(law, rho_m, data.rho_minus)
    v_m_alt = data.vb_plus + _hugoniot_gap(law, rho_m, data.rho_plus)
    if abs(v_m - v_m_alt) > _VM_AGREEMENT * max(1.0, abs(data.vb_minus), abs(data.vb_plus)):
        raise InternalConsistencyError(f"middle velocity mismatch {v_m} vs {v_m_alt}")

    nu_minus = (data.rho_minus * data.vb_minus - rho_m * v_m) / (data.rho_minus - rho_m)
    nu_plus = (data.rho_plus * data.vb_plus - rho_m * v_m) / (data.rho_plus - rho_m)
    sol = TwoShockSolution(rho_m, v_m, nu_minus, nu_plus)

    if not nu_minus < nu_plus:
        raise InternalConsistencyError("shock speeds out of order")
    if not data.vb_plus < v_m < data.vb_minus:
        raise InternalConsistencyError("middle velocity outside (vb+, vb-)")
    res = rankine_hugoniot_residuals(sol, data)
    if max(abs(r) for r in res) > 1e-8:
        raise InternalConsistencyError(f"Rankine-Hugoniot residuals too large: {res}")
    return sol


def rankine_hugoniot_residuals(sol: TwoShockSolution, data: RiemannData) -> tuple[float, float, float, float]:
    """Relative (mass-, momentum-, mass+, momentum+) jump residuals.

    Each residual is divided by the largest flux term entering it.
    """
    law = data.law
    out = []
    for (rl, vl), (rr, vr), nu in (
        (data.left, sol.middle, sol.nu_minus),
        (sol.middle, data.right, sol.nu_plus),
    ):
        ml, mr = rl * vl, rr * vr
        fl, fr = rl * vl * vl + law.pressure(rl), rr * vr * vr + law.pressure(rr)
        mass = nu * (rl - rr) - (ml - mr)
        mom = nu * (ml - mr) - (fl - fr)
        mass_scale = max(abs(nu * rl), abs(nu * rr), abs(ml), abs(mr), 1e-300)
        mom_scale = max(abs(nu * ml), abs(nu * mr), abs(fl), abs(fr), 1e-300)
        out += [mass / mass_scale, mom / mom_scale]
    return (out[0], out[1], out[2], out[3])


def energy(state: State, law: PressureLaw) -> float:
    rho, v = state
    return 0.5 * rho * v * v + rho * law.internal_energy(rho)


def energy_flux(state: State, law: PressureLaw) -> float:
    rho, v = state
    return (energy(state, law) + law.pressure(rho)) * v


def shock_energy_production(left: State, right: State, nu: float, law: PressureLaw) -> float:
    """Energy production -nu [E] + [F] across a jump moving with speed nu.

    Non-positive values mean the jump satisfies the energy inequality.
    """
    return -nu * (energy(right, law) - energy(left, law)) + (energy_flux(right, law) - energy_flux(left, law))
