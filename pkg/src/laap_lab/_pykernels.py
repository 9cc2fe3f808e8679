"""Pure-Python kernels; reference twin of ``_ckernels.pyx``.

Keep the two files algorithmically identical: tests compare them sample by
sample.
"""

import math

import numpy as np

STATUS_OK = 0
STATUS_LEFT_DOMAIN = 1
STATUS_SINGULAR_START = 2

_MAX_HALVINGS = 60


def osc_rhs(x, v):
    """Right-hand side of the Dafermos oscillator; NaN where undefined."""
    if (x - 1.0) * (x - 1.0) + v * v < 1.0:
        return 1.0 - x
    if x > 0.0:
        return (v * v - x * x) / (2.0 * x)
    return math.nan


def _rk4(x, v, h):
    a1 = osc_rhs(x, v)
    a2 = osc_rhs(x + 0.5 * h * v, v + 0.5 * h * a1)
    v2 = v + 0.5 * h * a1
    a3 = osc_rhs(x + 0.5 * h * v2, v + 0.5 * h * a2)
    v3 = v + 0.5 * h * a2
    a4 = osc_rhs(x + h * v3, v + h * a3)
    v4 = v + h * a3
    xn = x + h / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4)
    vn = v + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
    return xn, vn


def integrate_switching(x0, v0, t0, dt, t_end, switch_c, delta, eta):
    """RK4 for x'' = g(x, x') with a switch at the origin.

    Steps are ``dt`` except within a short time of the origin, where they
    shrink to ``eta * r / |f|`` (r: distance to the origin, f: phase
    velocity).  When the state enters the ball of radius ``delta`` the
    switch time is recorded, a sample (t_s, 0, 0) is emitted, and the state
    is re-seeded on the circle of parameter ``switch_c`` leaving the origin,
    at elapsed phase 2 delta / switch_c.

    Returns (t, x, v, switch_times, status).
    """
    ts = [t0]
    xs = [x0]
    vs = [v0]
    switches = []
    t, x, v = t0, x0, v0
    if math.hypot(x, v) < delta or math.isnan(osc_rhs(x, v)):
        return np.array(ts), np.array(xs), np.array(vs), np.array(switches), STATUS_SINGULAR_START
    end_tol = 1e-14 * max(1.0, abs(t_end))
    while t_end - t > end_tol:
        r = math.hypot(x, v)
        speed = math.hypot(v, osc_rhs(x, v))
        h = dt
        if speed > 0.0 and eta * r < h * speed:
            h = eta * r / speed
        if h > t_end - t:
            h = t_end - t
        halvings = 0
        while True:
            xn, vn = _rk4(x, v, h)
            if xn > 0.0 and vn == vn:
                break
            h *= 0.5
            halvings += 1
            if halvings > _MAX_HALVINGS:
                return np.array(ts), np.array(xs), np.array(vs), np.array(switches), STATUS_LEFT_DOMAIN
        t += h
        x, v = xn, vn
        if math.hypot(x, v) < delta:
            switches.append(t)
            ts.append(t)
            xs.append(0.0)
            vs.append(0.0)
            tau = 2.0 * delta / switch_c
            if t + tau > t_end:
                break
            t += tau
            s = math.sin(0.5 * tau)
            x = 2.0 * switch_c * s * s
            v = switch_c * math.sin(tau)
        ts.append(t)
        xs.append(x)
        vs.append(v)
    return np.array(ts), np.array(xs), np.array(vs), np.array(switches), STATUS_OK


def chi_euler(chi0, a, b, dt, n_max):
    """Explicit Euler for chi' = -a sqrt(chi) - b chi**1.5.

    Stops after the first non-positive value (stored as 0.0) or after
    ``n_max`` samples.
    """
    out = [chi0]
    c = chi0
    while len(out) < n_max and c > 0.0:
        sq = math.sqrt(c)
        c = c - dt * (a * sq + b * c * sq)
        if c <= 0.0:
            c = 0.0
        out.append(c)
    return np.array(out)


def chi_first_violation(values, times, c1, c2, nlam, slack):
    """First index breaking chi > n lambda or the discrete slope bound.

    Returns (index, kind) with kind 0 = none, 1 = obstruction, 2 = slope.
    """
    n = len(values)
    for k in range(n):
        c = values[k]
        if not c > nlam[k]:
            return k, 1
        if k + 1 < n:
            sq = math.sqrt(c)
            slope = (values[k + 1] - c) / (times[k + 1] - times[k])
            if slope > -c1 * sq - c2 * c * sq + slack:
                return k, 2
    return -1, 0
