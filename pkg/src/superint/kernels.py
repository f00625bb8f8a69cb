"""Compiled inner loops for trajectory integration.

Every catalog Hamiltonian has the separable form
``H = |p|^2/2 + sum a_i q_i^2/2 + sum b_i/q_i^2 - gamma/|q|``, so one force
routine covers all of them. The loops below are numba-compiled unless
``SUPERINT_DISABLE_NUMBA`` is set, in which case they run as plain Python
over numpy arrays (see :mod:`superint._accel`).

Status codes returned by the loops:
``0`` finished, ``1`` step size underflow, ``2`` step landed within
``eps`` of a singular hyperplane, ``3`` step budget exhausted.
"""

import numpy as np

from ._accel import njit

OK = 0
UNDERFLOW = 1
SINGULAR = 2
MAX_STEPS = 3

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# error weights: fifth-order minus embedded fourth-order solution
_E1 = 71.0 / 57600.0
_E3 = -71.0 / 16695.0
_E4 = 71.0 / 1920.0
_E5 = -17253.0 / 339200.0
_E6 = 22.0 / 525.0
_E7 = -1.0 / 40.0


@njit(cache=True)
def potential_gradient(q, quad, barrier, gamma, out):
    """Write ``dV/dq`` into ``out``."""
    n = q.shape[0]
    r2 = 0.0
    for i in range(n):
        r2 += q[i] * q[i]
    g_r3 = 0.0
    if gamma != 0.0:
        g_r3 = gamma / (r2 * np.sqrt(r2))
    for i in range(n):
        g = quad[i] * q[i] + g_r3 * q[i]
        if barrier[i] != 0.0:
            g -= 2.0 * barrier[i] / (q[i] * q[i] * q[i])
        out[i] = g


@njit(cache=True)
def energy(q, p, quad, barrier, gamma):
    n = q.shape[0]
    e = 0.0
    r2 = 0.0
    for i in range(n):
        e += 0.5 * p[i] * p[i] + 0.5 * quad[i] * q[i] * q[i]
        if barrier[i] != 0.0:
            e += barrier[i] / (q[i] * q[i])
        r2 += q[i] * q[i]
    if gamma != 0.0:
        e -= gamma / np.sqrt(r2)
    return e


@njit(cache=True)
def too_close(q, barrier, gamma, eps):
    """True if ``q`` sits within ``eps`` of a hyperplane or origin the force divides by."""
    n = q.shape[0]
    r2 = 0.0
    for i in range(n):
        if barrier[i] != 0.0 and abs(q[i]) < eps:
            return True
        r2 += q[i] * q[i]
    if gamma != 0.0 and np.sqrt(r2) < eps:
        return True
    return False


@njit(cache=True)
def verlet_run(q0, p0, dt, nsteps, stride, quad, barrier, gamma, eps):
    """Kick-drift-kick leapfrog; stores every ``stride``-th state.

    Returns ``(qs, ps, steps_done, status)``. Row 0 holds the initial
    state; a run that stops early keeps the rows filled so far.
    """
    n = q0.shape[0]
    nrows = nsteps // stride + 1
    qs = np.empty((nrows, n))
    ps = np.empty((nrows, n))
    q = q0.copy()
    p = p0.copy()
    qs[0] = q
    ps[0] = p
    grad = np.empty(n)
    potential_gradient(q, quad, barrier, gamma, grad)
    half = 0.5 * dt
    row = 1
    for step in range(1, nsteps + 1):
        for i in range(n):
            p[i] -= half * grad[i]
        for i in range(n):
            q[i] += dt * p[i]
        if too_close(q, barrier, gamma, eps):
            return qs[:row], ps[:row], step - 1, SINGULAR
        potential_gradient(q, quad, barrier, gamma, grad)
        for i in range(n):
            p[i] -= half * grad[i]
        if step % stride == 0:
            qs[row] = q
            ps[row] = p
            row += 1
    return qs[:row], ps[:row], nsteps, OK


@njit(cache=True)
def euler_run(q0, p0, dt, nsteps, stride, quad, barrier, gamma, eps):
    """Explicit (non-symplectic) Euler with the same cost per step as leapfrog.

    Used as a control showing secular energy drift.
    """
    n = q0.shape[0]
    nrows = nsteps // stride + 1
    qs = np.empty((nrows, n))
    ps = np.empty((nrows, n))
    q = q0.copy()
    p = p0.copy()
    qs[0] = q
    ps[0] = p
    grad = np.empty(n)
    row = 1
    for step in range(1, nsteps + 1):
        potential_gradient(q, quad, barrier, gamma, grad)
        for i in range(n):
            q[i] += dt * p[i]
            p[i] -= dt * grad[i]
        if too_close(q, barrier, gamma, eps):
            return qs[:row], ps[:row], step - 1, SINGULAR
        if step % stride == 0:
            qs[row] = q
            ps[row] = p
            row += 1
    return qs[:row], ps[:row], nsteps, OK


@njit(cache=True)
def hamilton_rhs(y, quad, barrier, gamma, out):
    """``(dq/dt, dp/dt) = (p, -dV/dq)`` for the stacked state ``y = (q, p)``."""
    n = y.shape[0] // 2
    potential_gradient(y[:n], quad, barrier, gamma, out[n:])
    for i in range(n):
        out[i] = y[n + i]
        out[n + i] = -out[n + i]


@njit(cache=True)
def _error_norm(err, y, ynew, rtol, atol):
    acc = 0.0
    m = y.shape[0]
    for i in range(m):
        sc = atol + rtol * max(abs(y[i]), abs(ynew[i]))
        e = err[i] / sc
        acc += e * e
    return np.sqrt(acc / m)


@njit(cache=True)
def _initial_step(y, f, rtol, atol, quad, barrier, gamma):
    m = y.shape[0]
    d0 = 0.0
    d1 = 0.0
    for i in range(m):
        sc = atol + rtol * abs(y[i])
        d0 += (y[i] / sc) ** 2
        d1 += (f[i] / sc) ** 2
    d0 = np.sqrt(d0 / m)
    d1 = np.sqrt(d1 / m)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    y1 = y + h0 * f
    f1 = np.empty(m)
    hamilton_rhs(y1, quad, barrier, gamma, f1)
    d2 = 0.0
    for i in range(m):
        sc = atol + rtol * abs(y[i])
        d2 += ((f1[i] - f[i]) / sc) ** 2
    d2 = np.sqrt(d2 / m) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1)


@njit(cache=True)
def dopri_run(y0, t_end, rtol, atol, quad, barrier, gamma, eps, h_init, max_steps):
    """Adaptive Dormand-Prince 5(4) on Hamilton's equations from ``t = 0``.

    Returns ``(ts, ys, nfev, status)`` with one row per accepted step; the
    last step is shortened to land exactly on ``t_end``.
    """
    m = y0.shape[0]
    n = m // 2
    cap = 1024
    ts = np.empty(cap)
    ys = np.empty((cap, m))
    ts[0] = 0.0
    ys[0] = y0
    count = 1

    y = y0.copy()
    k1 = np.empty(m)
    k2 = np.empty(m)
    k3 = np.empty(m)
    k4 = np.empty(m)
    k5 = np.empty(m)
    k6 = np.empty(m)
    k7 = np.empty(m)
    tmp = np.empty(m)
    ynew = np.empty(m)
    err = np.empty(m)

    hamilton_rhs(y, quad, barrier, gamma, k1)
    nfev = 1
    if h_init > 0.0:
        h = h_init
    else:
        h = _initial_step(y, k1, rtol, atol, quad, barrier, gamma)
        nfev += 1
    t = 0.0
    steps = 0
    status = OK
    while t < t_end:
        if steps >= max_steps:
            status = MAX_STEPS
            break
        last = False
        if t + h >= t_end:
            h = t_end - t
            last = True
        if h <= 1e-14 * max(1.0, abs(t)):
            status = UNDERFLOW
            break

        for i in range(m):
            tmp[i] = y[i] + h * _A21 * k1[i]
        hamilton_rhs(tmp, quad, barrier, gamma, k2)
        for i in range(m):
            tmp[i] = y[i] + h * (_A31 * k1[i] + _A32 * k2[i])
        hamilton_rhs(tmp, quad, barrier, gamma, k3)
        for i in range(m):
            tmp[i] = y[i] + h * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
        hamilton_rhs(tmp, quad, barrier, gamma, k4)
        for i in range(m):
            tmp[i] = y[i] + h * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i])
        hamilton_rhs(tmp, quad, barrier, gamma, k5)
        for i in range(m):
            tmp[i] = y[i] + h * (
                _A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i] + _A64 * k4[i] + _A65 * k5[i]
            )
        hamilton_rhs(tmp, quad, barrier, gamma, k6)
        for i in range(m):
            ynew[i] = y[i] + h * (
                _B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i] + _B5 * k5[i] + _B6 * k6[i]
            )
        hamilton_rhs(ynew, quad, barrier, gamma, k7)
        nfev += 6
        for i in range(m):
            err[i] = h * (
                _E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i] + _E6 * k6[i] + _E7 * k7[i]
            )
        en = _error_norm(err, y, ynew, rtol, atol)
        finite = True
        for i in range(m):
            if not np.isfinite(ynew[i]):
                finite = False
        if not finite:
            en = 1e10

        if en <= 1.0:
            t = t_end if last else t + h
            for i in range(m):
                y[i] = ynew[i]
                k1[i] = k7[i]  # first-same-as-last
            steps += 1
            if count == cap:
                cap *= 2
                ts2 = np.empty(cap)
                ys2 = np.empty((cap, m))
                ts2[:count] = ts[:count]
                ys2[:count] = ys[:count]
                ts = ts2
                ys = ys2
            ts[count] = t
            ys[count] = y
            count += 1
            if too_close(y[:n], barrier, gamma, eps):
                status = SINGULAR
                break
            fac = 10.0 if en == 0.0 else min(10.0, max(0.2, 0.9 * en ** -0.2))
        else:
            fac = max(0.2, 0.9 * en ** -0.2)
        h *= fac
    return ts[:count], ys[:count], nfev, status
