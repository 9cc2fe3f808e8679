import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from laap_lab.errors import DomainError, IntegrationDomainError, RejectedInputError, UndefinedPointError
from laap_lab.oscillator import (
    CircleTrajectory,
    OscState,
    action_exit_circle,
    conserved_quantity,
    exact_trajectory,
    g_rhs,
    integrate_with_switching,
    lagrangian,
    select_exit_circle,
    trajectory_action,
)

PI = math.pi


# ---------------------------------------------------------------------------
# g and the closed form


@pytest.mark.parametrize("x, xd, g", [(1.0, 1.0, 0.0), (1.0, 0.0, 0.0), (2.0, 0.0, -1.0)])
def test_g_examples(x, xd, g):
    assert g_rhs(OscState(x, xd)) == g


def test_g_undefined_at_origin():
    with pytest.raises(UndefinedPointError):
        g_rhs(OscState(0.0, 0.0))
    with pytest.raises(UndefinedPointError):
        g_rhs(OscState(1e-13, -1e-13))


def test_g_undefined_left_of_axis():
    with pytest.raises(DomainError):
        g_rhs(OscState(-0.5, 2.0))


def test_exact_trajectory_examples():
    s = exact_trajectory(1.0, PI, 0.0)
    assert (s.x, s.xdot) == pytest.approx((0.0, 0.0), abs=1e-15)
    s = exact_trajectory(1.0, PI, PI)
    assert (s.x, s.xdot) == pytest.approx((2.0, 0.0), abs=1e-15)


def test_exact_trajectory_matches_displayed_form():
    for c, th, t in [(1.0, 0.3, 0.2), (2.5, PI, 1.0), (4.0, -1.0, 3.0)]:
        s = exact_trajectory(c, th, t)
        assert s.x == pytest.approx(c * math.cos(th - t) + c, abs=1e-14 * c)
        assert s.xdot == pytest.approx(c * math.sin(th - t), abs=1e-14 * c)


@given(st.floats(1.0, 100.0), st.floats(-10.0, 10.0), st.floats(-10.0, 10.0))
def test_conserved_quantity_along_closed_form(c, th, t):
    s = exact_trajectory(c, th, t)
    if s.x > 1e-6 * c:
        assert conserved_quantity(s) == pytest.approx(c, rel=1e-8)


def test_circle_trajectory_requires_c_at_least_one():
    with pytest.raises(RejectedInputError):
        CircleTrajectory(0.5, PI)
    assert CircleTrajectory(2.0, PI).state(PI / 2) == exact_trajectory(2.0, PI, PI / 2)


# ---------------------------------------------------------------------------
# actions and selection


@pytest.mark.parametrize("c, t1, a", [(1.0, PI / 2, 1.0), (3.0, PI / 2, 3.0), (2.0, PI / 6, 1.0)])
def test_action_examples(c, t1, a):
    assert action_exit_circle(c, t1) == pytest.approx(a, abs=1e-12)


def test_action_matches_quadrature_of_c_minus_x():
    for c, t1 in [(2.0, PI / 6), (1.0, 2.0), (5.0, 0.3)]:
        val, _ = quad(lambda t: c - exact_trajectory(c, PI, t).x, 0.0, t1, epsabs=1e-13)
        assert action_exit_circle(c, t1) == pytest.approx(val, abs=1e-12)


@pytest.mark.parametrize("t1", [0.0, PI, -1.0, 4.0])
def test_action_window_rejected(t1):
    with pytest.raises(RejectedInputError):
        action_exit_circle(1.0, t1)


def test_selection_examples():
    assert select_exit_circle(1.0, {1.0, 1.5, 2.0, 5.0}) == 1.0
    assert select_exit_circle(0.4, {3.0}) == 3.0
    assert select_exit_circle(PI / 2, [2.0, 2.0]) == 2.0
    with pytest.raises(RejectedInputError):
        select_exit_circle(1.0, [])


# ---------------------------------------------------------------------------
# switching integrator


@pytest.fixture(scope="module")
def switched():
    start = exact_trajectory(2.0, PI / 2, 0.0)
    return integrate_with_switching(start, 1e-3, 3 * PI / 2 + 3.0, 1.0)


def test_switch_example_conservation_and_orbit(switched):
    tr = switched
    assert tr.switch_times.size == 1
    ts = float(tr.switch_times[0])
    assert ts == pytest.approx(3 * PI / 2, abs=1e-5)
    pre = (tr.t < ts) & (tr.x > 1e-3)
    c_pre = (tr.x[pre] ** 2 + tr.xdot[pre] ** 2) / (2 * tr.x[pre])
    assert np.max(np.abs(c_pre - 2.0)) <= 1e-6
    post = tr.t > ts
    ex = np.array([[exact_trajectory(1.0, PI, t - ts).x, exact_trajectory(1.0, PI, t - ts).xdot] for t in tr.t[post]])
    err = np.max(np.abs(ex - np.column_stack((tr.x[post], tr.xdot[post]))))
    assert err <= 1e-5


def test_switch_time_is_a_sample(switched):
    ts = switched.switch_times[0]
    k = int(np.flatnonzero(switched.t == ts)[0])
    assert switched.x[k] == 0.0 and switched.xdot[k] == 0.0


@pytest.mark.parametrize("t1", [0.5, 1.0, PI / 2, 2.5])
def test_sampled_action_matches_closed_form(switched, t1):
    ts = float(switched.switch_times[0])
    assert trajectory_action(switched, ts, ts + t1, 1.0) == pytest.approx(math.sin(t1), abs=1e-6)


def test_no_switch_before_origin_return():
    tr = integrate_with_switching(exact_trajectory(1.5, PI, 0.1), 1e-3, 4.0, 1.0)
    assert tr.switch_times.size == 0
    assert len(tr) > 1 and tr.t[-1] == pytest.approx(4.0)


def test_integrator_rejects_bad_inputs():
    good = exact_trajectory(2.0, PI / 2, 0.0)
    with pytest.raises(RejectedInputError):
        integrate_with_switching(good, 0.05, 1.0, 1.0)
    with pytest.raises(RejectedInputError):
        integrate_with_switching(good, 1e-3, 1.0, 0.5)
    with pytest.raises(RejectedInputError):
        integrate_with_switching(OscState(1.0, 0.0), 1e-3, 1.0, 1.0)
    with pytest.raises(RejectedInputError):
        integrate_with_switching(good, 1e-3, -1.0, 1.0)


def test_leaving_the_domain_is_reported(monkeypatch):
    from laap_lab import kernels

    def fake(*args):
        return np.array([0.0]), np.array([1.0]), np.array([1.0]), np.array([]), kernels.STATUS_LEFT_DOMAIN

    monkeypatch.setattr(kernels, "integrate_switching", fake)
    with pytest.raises(IntegrationDomainError):
        integrate_with_switching(exact_trajectory(2.0, PI / 2, 0.0), 1e-3, 1.0, 1.0)


def test_trajectory_action_window_checked(switched):
    with pytest.raises(RejectedInputError):
        trajectory_action(switched, -1.0, 1.0, 1.0)


# ---------------------------------------------------------------------------
# invariants


@pytest.mark.invariant
@pytest.mark.parametrize("c0", [1.01, 1.5, 2.0, 3.5])
def test_conservation_over_one_revolution(c0):
    start = exact_trajectory(c0, PI / 2, 0.0)
    tr = integrate_with_switching(start, 1e-3, 2 * PI, c0)
    assert tr.t[-1] == pytest.approx(2 * PI)
    m = tr.x > 1e-3
    c = (tr.x[m] ** 2 + tr.xdot[m] ** 2) / (2 * tr.x[m])
    assert np.max(np.abs(c - c0)) <= 1e-6


def test_unit_circle_conservation_away_from_origin():
    # c = 1 runs along the unit circle where the two branches of g meet;
    # g is only continuous there, so accuracy near the origin is lower
    tr = integrate_with_switching(exact_trajectory(1.0, PI / 2, 0.0), 1e-3, 2 * PI, 1.0)
    m = tr.x > 0.1
    c = (tr.x[m] ** 2 + tr.xdot[m] ** 2) / (2 * tr.x[m])
    assert np.max(np.abs(c - 1.0)) <= 1e-6


@pytest.mark.invariant
def test_closed_form_solves_the_ode():
    rng = np.random.default_rng(3)
    h = 1e-2
    w = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / (12.0 * h * h)  # fourth-order stencil
    for _ in range(1000):
        c = rng.uniform(1.0, 5.0)
        phase = rng.uniform(-PI + 0.3, PI - 0.3)  # stays away from the origin
        t = rng.uniform(-3.0, 3.0)
        th = phase + t
        xs = np.array([exact_trajectory(c, th, t + k * h).x for k in (-2, -1, 0, 1, 2)])
        assert abs(w @ xs - g_rhs(exact_trajectory(c, th, t))) <= 1e-8 * c


@pytest.mark.invariant
@given(st.floats(0.01, PI - 0.01), st.floats(1.0, 50.0), st.floats(1e-3, 10.0))
def test_action_strictly_increasing_in_c(t1, c, dc):
    assert action_exit_circle(c + dc, t1) > action_exit_circle(c, t1)


@pytest.mark.invariant
@given(st.floats(0.01, PI - 0.01), st.lists(st.floats(1.0, 100.0), min_size=1, max_size=8))
def test_selection_returns_smallest_candidate(t1, cands):
    assert select_exit_circle(t1, cands) == min(cands)


@pytest.mark.invariant
@given(st.floats(1.0, 20.0), st.floats(-PI + 1e-3, PI - 1e-3))
def test_lagrangian_equals_c_minus_x_on_circles(c, phase):
    s = exact_trajectory(c, phase, 0.0)
    assert lagrangian(s) == pytest.approx(c - s.x, abs=1e-10 * c)


@pytest.mark.invariant
@pytest.mark.parametrize("c", [1.0, 1.2, 3.0])
def test_exit_circles_never_enter_the_inner_disk(c):
    start = exact_trajectory(c + 1.0, 1.0 - PI, 0.0)
    tr = integrate_with_switching(start, 1e-3, 1.0 + 2.0, c)
    d = (tr.x - 1.0) ** 2 + tr.xdot**2
    assert np.all(d >= 1.0 - 1e-6)
