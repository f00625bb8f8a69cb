"""Trajectories, conservation drift and closed-orbit search."""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import kernels
from .catalog import Model
from .errors import DomainError, StepSizeError
from .fields import EPS_DOM, PhaseField, PhasePoint, evaluate_batch

METHODS = ("verlet", "rk45", "euler")


@dataclass
class Trajectory:
    times: np.ndarray
    q: np.ndarray
    p: np.ndarray
    method: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.q = np.atleast_2d(np.asarray(self.q, dtype=float))
        self.p = np.atleast_2d(np.asarray(self.p, dtype=float))
        if not (len(self.times) == len(self.q) == len(self.p)):
            raise ValueError("times, q and p must have the same length")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def states(self) -> list[PhasePoint]:
        return [PhasePoint(q, p) for q, p in zip(self.q, self.p)]

    @property
    def final(self) -> PhasePoint:
        return PhasePoint(self.q[-1], self.p[-1])

    def values(self, f: PhaseField) -> np.ndarray:
        return evaluate_batch(f, self.q, self.p)

    def write_csv(self, path, hamiltonian: PhaseField) -> None:
        """``t,q1..qN,p1..pN,H`` with one row per stored state, written atomically."""
        n = self.q.shape[1]
        header = ",".join(["t"] + [f"q{i + 1}" for i in range(n)] + [f"p{i + 1}" for i in range(n)] + ["H"])
        h = evaluate_batch(hamiltonian, self.q, self.p)
        table = np.column_stack([self.times, self.q, self.p, h])
        _atomic_write(path, lambda fh: np.savetxt(fh, table, fmt="%.17e", delimiter=",", header=header, comments=""))


def _atomic_write(path, writer) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            writer(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _state(model: Model, state: PhasePoint):
    if state.arity != model.N:
        raise DomainError(f"{model.name} needs {model.N} coordinates, got {state.arity}")
    quad, barrier, gamma = model.potential.arrays()
    if kernels.too_close(state.q, barrier, gamma, EPS_DOM):
        raise DomainError(f"initial state lies on a singular hyperplane of {model.name}")
    return quad, barrier, gamma


def _fixed_step(kernel, model, state, dt, nsteps, stride, method):
    if nsteps < 0 or stride < 1:
        raise ValueError("nsteps must be >= 0 and stride >= 1")
    quad, barrier, gamma = _state(model, state)
    qs, ps, done, status = kernel(
        state.q.copy(), state.p.copy(), float(dt), int(nsteps), int(stride), quad, barrier, gamma, EPS_DOM
    )
    if status == kernels.SINGULAR:
        raise StepSizeError(f"{method}: step {done + 1} landed within {EPS_DOM:g} of a singular hyperplane")
    times = np.arange(len(qs)) * stride * float(dt)
    if dt < 0:
        times = -times
    return qs, ps, times


def verlet_step(model: Model, state: PhasePoint, dt: float) -> PhasePoint:
    """One kick-drift-kick leapfrog step (negative ``dt`` steps backwards)."""
    if dt == 0:
        return state
    qs, ps, _ = _fixed_step(kernels.verlet_run, model, state, dt, 1, 1, "verlet")
    return PhasePoint(qs[-1], ps[-1])


def integrate_verlet(model: Model, state: PhasePoint, t_end: float, dt: float, stride: int = 1) -> Trajectory:
    if not (dt > 0 and t_end > 0):
        raise ValueError("dt and t_end must be positive")
    nsteps = int(round(t_end / dt))
    qs, ps, times = _fixed_step(kernels.verlet_run, model, state, dt, nsteps, stride, "verlet")
    return Trajectory(times, qs, ps, "verlet", {"dt": dt, "stride": stride})


def integrate_euler(model: Model, state: PhasePoint, t_end: float, dt: float, stride: int = 1) -> Trajectory:
    """Explicit Euler, kept only as a non-symplectic control."""
    if not (dt > 0 and t_end > 0):
        raise ValueError("dt and t_end must be positive")
    nsteps = int(round(t_end / dt))
    qs, ps, times = _fixed_step(kernels.euler_run, model, state, dt, nsteps, stride, "euler")
    return Trajectory(times, qs, ps, "euler", {"dt": dt, "stride": stride})


def _dopri(model, y0, t_end, rel_tol, abs_tol, max_steps):
    quad, barrier, gamma = model.potential.arrays()
    ts, ys, nfev, status = kernels.dopri_run(
        np.asarray(y0, dtype=float).copy(), float(t_end), float(rel_tol), float(abs_tol),
        quad, barrier, gamma, EPS_DOM, 0.0, int(max_steps),
    )
    if status == kernels.UNDERFLOW:
        raise StepSizeError(f"rk45: step size underflow at t = {ts[-1]:.6g}")
    if status == kernels.SINGULAR:
        raise StepSizeError(f"rk45: step landed within {EPS_DOM:g} of a singular hyperplane at t = {ts[-1]:.6g}")
    if status == kernels.MAX_STEPS:
        raise StepSizeError(f"rk45: exceeded {max_steps} steps before t = {t_end}")
    return ts, ys, nfev


def integrate_adaptive(
    model: Model,
    state: PhasePoint,
    t_end: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
    max_steps: int = 10_000_000,
) -> Trajectory:
    """Dormand-Prince 5(4) with local error control."""
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if not (rel_tol > 0 and abs_tol > 0):
        raise ValueError("tolerances must be positive")
    _state(model, state)
    ts, ys, nfev = _dopri(model, state.as_vector(), t_end, rel_tol, abs_tol, max_steps)
    n = model.N
    return Trajectory(ts, ys[:, :n], ys[:, n:], "rk45", {"rel_tol": rel_tol, "abs_tol": abs_tol, "nfev": int(nfev)})


def conservation_drift(traj: Trajectory, fields: Iterable[PhaseField]) -> dict[str, float]:
    """``max_t |f(x(t)) - f(x(0))| / (1 + |f(x(0))|)`` for each field."""
    out = {}
    for f in fields:
        v = evaluate_batch(f, traj.q, traj.p)
        out[f.name] = float(np.max(np.abs(v - v[0])) / (1.0 + abs(v[0])))
    return out


# closed orbits -----------------------------------------------------------------

@dataclass
class Recurrence:
    time: float
    distance: float


def _rhs(model, y):
    quad, barrier, gamma = model.potential.arrays()
    out = np.empty_like(y)
    kernels.hamilton_rhs(y, quad, barrier, gamma, out)
    return out


def orbit_closure(
    model: Model,
    state: PhasePoint,
    t_max: float,
    match_tol: float = 1e-6,
    rel_tol: float = 1e-11,
    abs_tol: float = 1e-13,
) -> float | None:
    """Smallest recurrence time of the orbit through ``state``, or ``None``.

    The distance to the start is ``max_i |y_i(t) - y_i(0)| / (1 + |y_i(0)|)``
    over the stacked ``(q, p)`` vector. Each approach to the start is located
    by bisection on the time derivative of the squared scaled distance; the
    first closest approach whose distance is within ``match_tol`` is
    returned.
    """
    rec = find_recurrence(model, state, t_max, match_tol, rel_tol, abs_tol)
    return None if rec is None else rec.time


def find_recurrence(model, state, t_max, match_tol=1e-6, rel_tol=1e-11, abs_tol=1e-13) -> Recurrence | None:
    if not (t_max > 0 and match_tol > 0):
        raise ValueError("t_max and match_tol must be positive")
    _state(model, state)
    y0 = state.as_vector()
    scale = 1.0 + np.abs(y0)
    ts, ys, _ = _dopri(model, y0, t_max, rel_tol, abs_tol, 10_000_000)

    def slope(y):
        return float(np.sum((y - y0) / scale**2 * _rhs(model, y)))

    def dist(y):
        return float(np.max(np.abs(y - y0) / scale))

    def advance(y, t0, t1):
        if t1 <= t0:
            return y
        return _dopri(model, y, t1 - t0, rel_tol, abs_tol, 10_000_000)[1][-1]

    slopes = np.array([slope(y) for y in ys])
    dists = np.max(np.abs(ys - y0) / scale, axis=1)
    speeds = np.array([np.max(np.abs(_rhs(model, y)) / scale) for y in ys])
    t_tol = 1e-3 * match_tol

    for i in range(1, len(ts) - 1):
        if not (slopes[i] < 0.0 <= slopes[i + 1]):
            continue
        h = ts[i + 1] - ts[i]
        reach = 2.0 * h * max(speeds[i], speeds[i + 1])
        if min(dists[i], dists[i + 1]) - reach > match_tol:
            continue
        lo, hi = ts[i], ts[i + 1]
        y_lo = ys[i]
        while hi - lo > t_tol:
            mid = 0.5 * (lo + hi)
            y_mid = advance(y_lo, lo, mid)
            if slope(y_mid) < 0.0:
                lo, y_lo = mid, y_mid
            else:
                hi = mid
        t_star = 0.5 * (lo + hi)
        d = dist(advance(y_lo, lo, t_star))
        if d <= match_tol:
            return Recurrence(t_star, d)
    return None
