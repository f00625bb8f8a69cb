"""Torus reduction by planar rotations.

The full space ``R^(2m)`` is split into ``m`` coordinate planes
``(x_(2i-1), x_(2i))``; each plane gets polar coordinates (radius, angle)
and the conjugate pair (radial momentum, planar angular momentum). The
reduced system keeps the radii and radial momenta, with every planar
angular momentum frozen to a constant fixed by the barrier strengths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import catalog, dual
from .catalog import Model
from .errors import DimensionError, DomainError, ParameterError
from .fields import EPS_DOM, PhaseField, PhasePoint, evaluate_batch, guard_q
from .rng import Xoshiro256

CONVENTIONS = ("coulomb", "oscillator")


@dataclass(frozen=True)
class ReductionMap:
    """Chart plus momentum level: ``sqrt(2 k_i)`` (coulomb) or ``sqrt(k_i)`` (oscillator)."""

    k: tuple[float, ...]
    convention: str

    def __post_init__(self):
        k = tuple(float(v) for v in self.k)
        if self.convention not in CONVENTIONS:
            raise ParameterError(f"convention must be one of {CONVENTIONS}, got {self.convention!r}")
        if any(not (v >= 0 and math.isfinite(v)) for v in k):
            raise ParameterError(f"barrier constants must be non-negative, got {k}")
        object.__setattr__(self, "k", k)

    @classmethod
    def coulomb(cls, k1=0.3, k2=0.5, k3=0.7) -> "ReductionMap":
        return cls((k1, k2, k3), "coulomb")

    @classmethod
    def oscillator(cls, k1=0.4, k2=0.9) -> "ReductionMap":
        return cls((k1, k2), "oscillator")

    @property
    def reduced_N(self) -> int:
        return len(self.k)

    @property
    def full_N(self) -> int:
        return 2 * len(self.k)

    def cyclic_momenta(self) -> np.ndarray:
        k = np.asarray(self.k)
        return np.sqrt(2.0 * k) if self.convention == "coulomb" else np.sqrt(k)


# chart ---------------------------------------------------------------------------

def polar_to_cartesian(radii, angles, radial_p, angular_p):
    """Planar polar chart; accepts arrays or dual numbers.

    Returns hatted ``(q, p)`` lists of length ``2m``.
    """
    q, p = [], []
    for x, th, pr, ell in zip(radii, angles, radial_p, angular_p):
        c, s = dual.cos(th), dual.sin(th)
        q += [x * c, x * s]
        p += [pr * c - ell * s / x, pr * s + ell * c / x]
    return q, p


def in_polar_coordinates(f: PhaseField) -> PhaseField:
    """``f`` composed with the polar chart.

    The new coordinates are ``(radii, angles)`` with momenta
    ``(radial momenta, angular momenta)``.
    """
    if f.arity % 2:
        raise DimensionError("polar chart needs an even number of coordinates")
    m = f.arity // 2
    fn = f.fn

    def composed(y, py):
        q, p = polar_to_cartesian(y[:m], y[m:], py[:m], py[m:])
        return fn(q, p)

    guards = guard_q(*range(m))
    return PhaseField(composed, f.arity, f"{f.name}∘polar", f.complex, guards)


def lift_batch(rmap: ReductionMap, Q, P, angles) -> tuple[np.ndarray, np.ndarray]:
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    P = np.atleast_2d(np.asarray(P, dtype=float))
    angles = np.broadcast_to(np.asarray(angles, dtype=float), Q.shape)
    if Q.shape[1] != rmap.reduced_N or P.shape != Q.shape:
        raise DimensionError(f"reduced points need {rmap.reduced_N} coordinates, got {Q.shape}")
    if np.any(Q <= EPS_DOM):
        raise DomainError("lift needs strictly positive radii")
    ell = np.broadcast_to(rmap.cyclic_momenta(), Q.shape)
    q, p = polar_to_cartesian(Q.T, angles.T, P.T, ell.T)
    return np.column_stack(q), np.column_stack(p)


def lift(rmap: ReductionMap, reduced: PhasePoint, angles=None) -> PhasePoint:
    """Full-space point over ``reduced`` at the given angles (default 0)."""
    if reduced.arity != rmap.reduced_N:
        raise DimensionError(f"expected {rmap.reduced_N} reduced coordinates, got {reduced.arity}")
    if angles is None:
        angles = np.zeros(rmap.reduced_N)
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (rmap.reduced_N,):
        raise DimensionError(f"need {rmap.reduced_N} angles, got {angles.shape}")
    Q, P = lift_batch(rmap, reduced.q[None, :], reduced.p[None, :], angles[None, :])
    return PhasePoint(Q[0], P[0])


def _wrap_angle(theta: np.ndarray) -> np.ndarray:
    return np.where(theta <= -np.pi, theta + 2.0 * np.pi, theta)


def project_batch(rmap: ReductionMap, Q, P):
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if Q.shape[1] != rmap.full_N or P.shape != Q.shape:
        raise DimensionError(f"full points need {rmap.full_N} coordinates, got {Q.shape}")
    a, b = Q[:, 0::2], Q[:, 1::2]
    pa, pb = P[:, 0::2], P[:, 1::2]
    radii = np.hypot(a, b)
    if np.any(radii < EPS_DOM):
        raise DomainError("projection needs every coordinate plane away from its origin")
    angles = _wrap_angle(np.arctan2(b, a))
    radial = (a * pa + b * pb) / radii
    angular = a * pb - b * pa
    return radii, radial, angles, angular


def project(rmap: ReductionMap, full: PhasePoint):
    """``(reduced point, angles, planar angular momenta)`` of a full-space point."""
    radii, radial, angles, angular = project_batch(rmap, full.q[None, :], full.p[None, :])
    return PhasePoint(radii[0], radial[0]), angles[0], angular[0]


def momentum_map(rmap: ReductionMap, full: PhasePoint) -> np.ndarray:
    """Planar angular momenta ``(L_12, L_34, ...)``."""
    if full.arity != rmap.full_N:
        raise DimensionError(f"expected {rmap.full_N} coordinates, got {full.arity}")
    q, p = full.q, full.p
    return q[0::2] * p[1::2] - q[1::2] * p[0::2]


# pullback consistency --------------------------------------------------------------

@dataclass(frozen=True)
class PullbackResult:
    label: str
    angle_spread: float
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.angle_spread <= self.tol and self.residual <= self.tol

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "angle_spread": self.angle_spread,
            "residual": self.residual,
            "tol": self.tol,
            "pass": self.passed,
        }


def reduced_samples(rmap: ReductionMap, count: int, seed: int, n_angles: int = 4, radius=(0.3, 2.0), momentum=1.0):
    """Reduced points with positive radii plus ``n_angles`` angle vectors each."""
    m = rmap.reduced_N
    Q = np.empty((count, m))
    P = np.empty((count, m))
    A = np.empty((count, n_angles, m))
    for i in range(count):
        g = Xoshiro256.for_index(seed, i)
        u = np.asarray(g.uniforms(2 * m + n_angles * m))
        Q[i] = radius[0] + (radius[1] - radius[0]) * u[:m]
        P[i] = momentum * (2.0 * u[m : 2 * m] - 1.0)
        A[i] = np.pi - 2.0 * np.pi * u[2 * m :].reshape(n_angles, m)  # in (-pi, pi]
    return Q, P, A


def pullback_check(
    rmap: ReductionMap,
    full_field: PhaseField,
    reduced_field: PhaseField,
    samples: int = 200,
    tol: float = 1e-10,
    seed: int = 0,
    n_angles: int = 4,
    label: str | None = None,
) -> PullbackResult:
    """Compare a full-space field on lifted points with its reduced counterpart.

    Reports (a) the largest spread of the lifted values over the sampled
    angles and (b) the largest deviation from the reduced field, both
    relative to ``1 + |reduced value|``.
    """
    if full_field.arity != rmap.full_N or reduced_field.arity != rmap.reduced_N:
        raise DimensionError(
            f"field arities ({full_field.arity}, {reduced_field.arity}) do not match map "
            f"({rmap.full_N}, {rmap.reduced_N})"
        )
    Q, P, A = reduced_samples(rmap, samples, seed, n_angles)
    ref = evaluate_batch(reduced_field, Q, P)
    scale = 1.0 + np.abs(ref)
    lifted = np.empty((samples, n_angles), dtype=ref.dtype if np.iscomplexobj(ref) else float)
    if full_field.complex:
        lifted = lifted.astype(complex)
    for j in range(n_angles):
        FQ, FP = lift_batch(rmap, Q, P, A[:, j, :])
        lifted[:, j] = evaluate_batch(full_field, FQ, FP)
    spread = np.max(np.abs(lifted - lifted[:, :1]), axis=1) / scale
    resid = np.max(np.abs(lifted - ref[:, None]), axis=1) / scale
    return PullbackResult(label or reduced_field.name, float(spread.max()), float(resid.max()), tol)


# paired systems ------------------------------------------------------------------

PAIRS = {"coulomb": ("coulomb6", "coulomb3"), "oscillator": ("oscillator4", "oscillator2")}


def resolve_pair(name: str) -> str:
    key = name.lower().replace("/", ":")
    for pair, (full, red) in PAIRS.items():
        if key in (pair, f"{full}:{red}", full, red):
            return pair
    raise ParameterError(f"unknown model pair {name!r}; use 'coulomb' or 'oscillator'")


def coulomb_pullback_fields(full: Model, reduced: Model) -> list[tuple[str, PhaseField, PhaseField]]:
    """(label, full-space field, reduced field) for the Coulomb pair."""
    n = 6
    L = {(i, j): catalog.angular_momentum(n, i, j) for i in range(n) for j in range(i + 1, n)}
    A = [full.integral(f"A{i + 1}").field for i in range(n)]

    def cross(a, b):
        out = None
        for i in (2 * a, 2 * a + 1):
            for j in (2 * b, 2 * b + 1):
                term = L[(i, j)] ** 2
                out = term if out is None else out + term
        return out

    T = [A[2 * i] ** 2 + A[2 * i + 1] ** 2 for i in range(3)]
    pairs = [
        ("H", full.hamiltonian, reduced.hamiltonian),
        ("I1", cross(0, 1), reduced.integral("I1").field),
        ("I2", cross(0, 2), reduced.integral("I2").field),
        ("I3", cross(1, 2), reduced.integral("I3").field),
        ("T1", T[0], reduced.integral("T1").field),
        ("T2", T[1], reduced.integral("T2").field),
        ("T3", T[2], reduced.integral("T3").field),
        ("T", T[0] + T[1] + T[2], reduced.integral("T").field),
    ]
    return pairs


def oscillator_pullback_fields(full: Model, reduced: Model) -> list[tuple[str, PhaseField, PhaseField]]:
    inv = {i.label: i.field for i in catalog.rotation_invariant_integrals(full)}
    pairs = [("H", full.hamiltonian, reduced.hamiltonian)]
    for label in ("E1", "E2", "Q1", "Q1bar", "I1", "I2"):
        pairs.append((label, inv[label], reduced.integral(label).field))
    pairs.append(("Q", inv["Q1"].real(), reduced.integral("Q").field))
    return pairs


def build_pair(pair: str, **params):
    """Full model, reduced model, map and field pairs for ``coulomb`` or ``oscillator``."""
    pair = resolve_pair(pair)
    if pair == "coulomb":
        red = catalog.get_model("coulomb3", **params)
        full = catalog.coulomb6(red.params["gamma"])
        rmap = ReductionMap.coulomb(red.params["k1"], red.params["k2"], red.params["k3"])
        return full, red, rmap, coulomb_pullback_fields(full, red)
    red = catalog.get_model("oscillator2", **params)
    pr = red.params
    full = catalog.oscillator4(pr["omega"], pr["n1"], pr["n2"])
    rmap = ReductionMap.oscillator(pr["k1"], pr["k2"])
    return full, red, rmap, oscillator_pullback_fields(full, red)


def reduce_check(pair: str, samples: int = 200, seed: int = 0, tol: float = 1e-10, tol_quartic: float = 1e-8, **params):
    """Pullback consistency for every paired field of a full/reduced system."""
    full, red, rmap, pairs = build_pair(pair, **params)
    results = []
    for label, ff, rf in pairs:
        t = tol_quartic if label in ("T", "T1", "T2", "T3") else tol
        results.append(pullback_check(rmap, ff, rf, samples, t, seed, label=label))
    return results
