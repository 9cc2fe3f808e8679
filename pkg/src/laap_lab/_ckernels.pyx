# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; mirror of ``_pykernels.py``."""

import numpy as np
from libc.math cimport sqrt, hypot, sin, fabs, NAN, isnan

cdef enum:
    STATUS_OK = 0
    STATUS_LEFT_DOMAIN = 1
    STATUS_SINGULAR_START = 2
    MAX_HALVINGS = 60


cdef inline double _rhs(double x, double v) noexcept nogil:
    if (x - 1.0) * (x - 1.0) + v * v < 1.0:
        return 1.0 - x
    if x > 0.0:
        return (v * v - x * x) / (2.0 * x)
    return NAN


def osc_rhs(double x, double v):
    return _rhs(x, v)


cdef inline void _rk4(double x, double v, double h, double* xn, double* vn) noexcept nogil:
    cdef double a1, a2, a3, a4, v2, v3, v4
    a1 = _rhs(x, v)
    a2 = _rhs(x + 0.5 * h * v, v + 0.5 * h * a1)
    v2 = v + 0.5 * h * a1
    a3 = _rhs(x + 0.5 * h * v2, v + 0.5 * h * a2)
    v3 = v + 0.5 * h * a2
    a4 = _rhs(x + h * v3, v + h * a3)
    v4 = v + h * a3
    xn[0] = x + h / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4)
    vn[0] = v + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)


cdef class _Buffer:
    cdef public object t, x, v
    cdef double[::1] tv, xv, vv
    cdef Py_ssize_t n, cap

    def __cinit__(self, Py_ssize_t cap):
        self.cap = cap if cap > 16 else 16
        self.n = 0
        self.t = np.empty(self.cap)
        self.x = np.empty(self.cap)
        self.v = np.empty(self.cap)
        self.tv = self.t
        self.xv = self.x
        self.vv = self.v

    cdef void push(self, double t, double x, double v):
        if self.n == self.cap:
            self.cap *= 2
            self.t = np.resize(self.t, self.cap)
            self.x = np.resize(self.x, self.cap)
            self.v = np.resize(self.v, self.cap)
            self.tv = self.t
            self.xv = self.x
            self.vv = self.v
        self.tv[self.n] = t
        self.xv[self.n] = x
        self.vv[self.n] = v
        self.n += 1

    def arrays(self):
        return self.t[:self.n].copy(), self.x[:self.n].copy(), self.v[:self.n].copy()


def integrate_switching(double x0, double v0, double t0, double dt, double t_end,
                        double switch_c, double delta, double eta):
    cdef _Buffer buf = _Buffer(<Py_ssize_t>((t_end - t0) / dt) + 1024)
    cdef list switches = []
    cdef double t = t0, x = x0, v = v0, r, speed, h, xn = 0.0, vn = 0.0, tau, s
    cdef double end_tol = 1e-14 * (fabs(t_end) if fabs(t_end) > 1.0 else 1.0)
    cdef int halvings
    buf.push(t, x, v)
    if hypot(x, v) < delta or isnan(_rhs(x, v)):
        return (*buf.arrays(), np.array(switches), STATUS_SINGULAR_START)
    while t_end - t > end_tol:
        r = hypot(x, v)
        speed = hypot(v, _rhs(x, v))
        h = dt
        if speed > 0.0 and eta * r < h * speed:
            h = eta * r / speed
        if h > t_end - t:
            h = t_end - t
        halvings = 0
        while True:
            _rk4(x, v, h, &xn, &vn)
            if xn > 0.0 and vn == vn:
                break
            h *= 0.5
            halvings += 1
            if halvings > MAX_HALVINGS:
                return (*buf.arrays(), np.array(switches), STATUS_LEFT_DOMAIN)
        t += h
        x = xn
        v = vn
        if hypot(x, v) < delta:
            switches.append(t)
            buf.push(t, 0.0, 0.0)
            tau = 2.0 * delta / switch_c
            if t + tau > t_end:
                break
            t += tau
            s = sin(0.5 * tau)
            x = 2.0 * switch_c * s * s
            v = switch_c * sin(tau)
        buf.push(t, x, v)
    return (*buf.arrays(), np.array(switches), STATUS_OK)


def chi_euler(double chi0, double a, double b, double dt, Py_ssize_t n_max):
    cdef Py_ssize_t cap = n_max if n_max < 1 << 16 else 1 << 16
    out = np.empty(cap)
    cdef double[::1] o = out
    cdef Py_ssize_t n = 1
    cdef double c = chi0, sq
    o[0] = chi0
    while n < n_max and c > 0.0:
        sq = sqrt(c)
        c = c - dt * (a * sq + b * c * sq)
        if c <= 0.0:
            c = 0.0
        if n == cap:
            cap = cap * 2 if cap * 2 < n_max else n_max
            out = np.resize(out, cap)
            o = out
        o[n] = c
        n += 1
    return out[:n].copy()


def chi_first_violation(const double[::1] values, const double[::1] times, double c1, double c2,
                        const double[::1] nlam, double slack):
    cdef Py_ssize_t n = values.shape[0], k
    cdef double c, sq, slope
    for k in range(n):
        c = values[k]
        if not c > nlam[k]:
            return k, 1
        if k + 1 < n:
            sq = sqrt(c)
            slope = (values[k + 1] - c) / (times[k + 1] - times[k])
            if slope > -c1 * sq - c2 * c * sq + slack:
                return k, 2
    return -1, 0
