"""Least-action and entropy-rate admissibility of competing weak solutions.

Submodules
----------
eos             barotropic pressure law p = kappa rho**gamma
riemann         two-shock Riemann solver and shock energy production
subsolution     fan sub-solutions and closure rules for the kinetic constant
action_criteria least-action and entropy-rate verdicts
oscillator      Dafermos oscillator and exit-circle selection
aw_profiles     kinetic-energy profiles chi(t) of wild Euler solutions
cli             ``laap-lab`` command line
"""

from laap_lab.action_criteria import (
    Criterion,
    FanDomain,
    Preferred,
    Verdict,
    action_convex_integration,
    action_two_shock,
    dissipation_difference,
    l_diff,
    l_diff_derivative,
    l_diff_derivative_bound,
    laap_corollary_check,
    laap_theorem_check,
    laap_verdict,
)
from laap_lab.aw_profiles import (
    ChiProfile,
    aw_action,
    check_admissible,
    dissipation_rate,
    dominating_profile,
    entropy_rate_dominate,
    laap_verdict_aw,
    stepped_profile,
    total_energy,
)
from laap_lab.eos import PressureLaw
from laap_lab.errors import (
    CannotDominateError,
    DomainError,
    InfeasibleClosureError,
    IntegrationDomainError,
    InternalConsistencyError,
    LaapLabError,
    NoTwoShockError,
    RejectedInputError,
    UndefinedPointError,
)
from laap_lab.kernels import BACKEND
from laap_lab.oscillator import (
    OscState,
    action_exit_circle,
    integrate_with_switching,
    select_exit_circle,
)
from laap_lab.riemann import (
    RiemannData,
    TwoShockSolution,
    check_two_shock_conditions,
    solve_middle_state,
)
from laap_lab.subsolution import FanSubsolution, FixedC, MinC, solve_fan

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
