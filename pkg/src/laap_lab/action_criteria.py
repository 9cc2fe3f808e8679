"""Least-action and entropy-rate comparison of two-shock and fan solutions.

Actions are integrated over the box

    -L3 < x1 < L3,   nu_minus T < x2 < nu_plus T,   0 < t < T

whose x2-extent is set by a wedge (nu_minus, nu_plus).  Comparisons between
the two candidates use one common wedge, that of the two-shock solution, so
the candidates differ only inside P1.

Sign convention for :class:`Verdict`: a positive margin favours the
two-shock solution under either criterion.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

from laap_lab.eos import PressureLaw
from laap_lab.errors import RejectedInputError
from laap_lab.riemann import RiemannData, TwoShockSolution
from laap_lab.subsolution import FanSubsolution

TIE_RTOL = 1e-12


class Preferred(enum.Enum):
    TWO_SHOCK = "TwoShock"
    CONVEX_INTEGRATION = "ConvexIntegration"
    TIE = "Tie"


class Criterion(enum.Enum):
    LAAP = "LAAP"
    ENTROPY_RATE = "EntropyRate"


@dataclass(frozen=True)
class FanDomain:
    L3: float = 1.0
    T: float = 1.0

    def __post_init__(self) -> None:
        if not (self.L3 > 0.0 and self.T > 0.0):
            raise RejectedInputError("FanDomain needs L3 > 0 and T > 0")


@dataclass(frozen=True)
class Verdict:
    preferred: Preferred
    margin: float
    criterion: Criterion
    closure_label: str = ""


def _verdict(margin: float, scale: float, criterion: Criterion, label: str) -> Verdict:
    if abs(margin) <= TIE_RTOL * abs(scale):
        pref = Preferred.TIE
    elif margin > 0.0:
        pref = Preferred.TWO_SHOCK
    else:
        pref = Preferred.CONVEX_INTEGRATION
    return Verdict(pref, margin, criterion, label)


def lagrangian(rho: float, v: float, law: PressureLaw) -> float:
    """rho |v|^2 / 2 - rho eps(rho)."""
    return 0.5 * rho * v * v - rho * law.internal_energy(rho)


def _clipped_length(t, lo_slope, hi_slope, a, b):
    lo = a if lo_slope is None else max(a, lo_slope * t)
    hi = b if hi_slope is None else min(b, hi_slope * t)
    return max(0.0, hi - lo)


def region_volumes(nu_minus: float, nu_plus: float, dom: FanDomain) -> tuple[float, float, float]:
    """Space-time volumes of P-, P1, P+ inside the box of the wedge.

    The clipped x2-length of each region is piecewise linear in t, with
    kinks only where a wave line meets a box edge; the trapezoid rule over
    those kinks is therefore exact.
    """
    if not nu_minus < nu_plus:
        raise RejectedInputError("wedge requires nu_minus < nu_plus")
    T = dom.T
    a, b = nu_minus * T, nu_plus * T
    knots = {0.0, T}
    for nu in (nu_minus, nu_plus):
        if nu != 0.0:
            for edge in (a, b):
                tk = edge / nu
                if 0.0 < tk < T:
                    knots.add(tk)
    ts = sorted(knots)
    regions = ((None, nu_minus), (nu_minus, nu_plus), (nu_plus, None))
    vols = []
    for lo_s, hi_s in regions:
        lengths = [_clipped_length(t, lo_s, hi_s, a, b) for t in ts]
        area = sum(0.5 * (lengths[i] + lengths[i + 1]) * (ts[i + 1] - ts[i]) for i in range(len(ts) - 1))
        vols.append(2.0 * dom.L3 * area)
    return (vols[0], vols[1], vols[2])


def box_volume(nu_minus: float, nu_plus: float, dom: FanDomain) -> float:
    return 2.0 * dom.L3 * (nu_plus - nu_minus) * dom.T**2


def action_two_shock(ts: TwoShockSolution, data: RiemannData, dom: FanDomain) -> float:
    law = data.law
    vm, v1, vp = region_volumes(ts.nu_minus, ts.nu_plus, dom)
    return (
        vm * lagrangian(data.rho_minus, data.vb_minus, law)
        + v1 * lagrangian(ts.rho_m, ts.v_m, law)
        + vp * lagrangian(data.rho_plus, data.vb_plus, law)
    )


def action_convex_integration(
    s: FanSubsolution,
    dom: FanDomain,
    wedge: tuple[float, float] | None = None,
) -> float:
    """Action of every convex-integration solution built on ``s``.

    Inside P1 the kinetic density is rho1 C / 2.  ``wedge`` fixes the box;
    it defaults to the fan's own speeds, and comparisons pass the two-shock
    speeds.
    """
    data, law = s.data, s.data.law
    nm, npl = (s.nu_minus, s.nu_plus) if wedge is None else wedge
    vm, v1, vp = region_volumes(nm, npl, dom)
    inner = 0.5 * s.rho1 * s.C - s.rho1 * law.internal_energy(s.rho1)
    return (
        vm * lagrangian(data.rho_minus, data.vb_minus, law)
        + v1 * inner
        + vp * lagrangian(data.rho_plus, data.vb_plus, law)
    )


def l_diff(ts: TwoShockSolution, rho1: float, C: float, law: PressureLaw) -> float:
    """Two-shock Lagrangian minus convex-integration Lagrangian inside P1."""
    return (
        0.5 * ts.rho_m * ts.v_m**2
        - ts.rho_m * law.internal_energy(ts.rho_m)
        - 0.5 * rho1 * C
        + rho1 * law.internal_energy(rho1)
    )


def l_diff_derivative(rho1: float, C: float, dC: float, law: PressureLaw) -> float:
    """d L_diff / d rho1 given C(rho1) and its derivative dC."""
    return -0.5 * C - 0.5 * rho1 * dC + law.enthalpy_like(rho1)


def l_diff_derivative_bound(ts: TwoShockSolution, data: RiemannData, law: PressureLaw | None = None) -> float:
    """Lower bound for the left limit of dL_diff/drho1 at rho_m.

    Valid for any closure with C(rho_m-) = v_m**2 and C'(rho_m-) <= 0,
    using v_m**2 <= max(vb-**2, vb+**2).
    """
    law = data.law if law is None else law
    return -0.5 * max(data.vb_plus**2, data.vb_minus**2) + law.enthalpy_like(ts.rho_m)


def laap_theorem_check(ts: TwoShockSolution, data: RiemannData, law: PressureLaw | None = None) -> bool:
    """True when least action prefers the two-shock solution near rho_m."""
    return l_diff_derivative_bound(ts, data, law) > 0.0


class CorollaryCheck(NamedTuple):
    holds: bool
    value: float


def laap_corollary_check(data: RiemannData, law: PressureLaw | None = None) -> CorollaryCheck:
    """Data-only sufficient condition; needs no middle state."""
    law = data.law if law is None else law
    value = -0.5 * max(data.vb_minus**2, data.vb_plus**2) + max(
        law.enthalpy_like(data.rho_plus), law.enthalpy_like(data.rho_minus)
    )
    return CorollaryCheck(value > 0.0, value)


def dissipation_difference(
    ts: TwoShockSolution, s: FanSubsolution, data: RiemannData, dom: FanDomain
) -> Verdict:
    """Entropy-rate comparison on the two-shock box.

    Both candidates share the outer states, so boundary fluxes cancel and
    the energy difference over the box grows linearly in t.  The returned
    margin is the constant rate difference D_CI - D_2S; negative means the
    convex-integration family dissipates faster.
    """
    law = data.law
    e_2s = 0.5 * ts.rho_m * ts.v_m**2 + ts.rho_m * law.internal_energy(ts.rho_m)
    e_ci = 0.5 * s.rho1 * s.C + s.rho1 * law.internal_energy(s.rho1)
    width = 2.0 * dom.L3 * (ts.nu_plus - ts.nu_minus)
    margin = width * (e_ci - e_2s)
    return _verdict(margin, width * e_2s, Criterion.ENTROPY_RATE, s.closure_label)


def laap_verdict(ts: TwoShockSolution, s: FanSubsolution, data: RiemannData, dom: FanDomain) -> Verdict:
    """Least-action comparison; margin = A_CI - A_2S = -vol(P1) L_diff."""
    a_2s = action_two_shock(ts, data, dom)
    a_ci = action_convex_integration(s, dom, wedge=(ts.nu_minus, ts.nu_plus))
    return _verdict(a_ci - a_2s, a_2s, Criterion.LAAP, s.closure_label)


def p1_volume(ts: TwoShockSolution, dom: FanDomain) -> float:
    return region_volumes(ts.nu_minus, ts.nu_plus, dom)[1]
