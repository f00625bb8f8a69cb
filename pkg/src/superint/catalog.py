"""Closed-form Hamiltonians and integrals of motion.

Four systems are provided:

``coulomb6``
    Coulomb problem in six dimensions with its angular-momentum and
    Laplace-Runge-Lenz integrals.
``coulomb3``
    Its reduction by three planar rotations: Coulomb plus three
    inverse-square barriers ``k_i / x_i**2``.
``oscillator4``
    Four-dimensional anisotropic oscillator with frequencies
    ``(n1, n1, n2, n2) * omega``.
``oscillator2``
    Its reduction by two planar rotations: a two-dimensional anisotropic
    oscillator with Rosochatius barriers ``k_i / (2 x_i**2)``.

Barrier conventions differ between the two families and are kept as is:
in the Coulomb reduction the fixed planar momenta are ``sqrt(2 k_i)``, in
the oscillator reduction they are ``sqrt(k_i)``.

All coordinate indices in this module are 0-based internally; labels and
the public ``jauch_hill`` helper use the 1-based names.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import dual
from .dual import Cx
from .errors import ParameterError
from .fields import Guard, PhaseField, Weights, ZField, guard_q, guard_radius

MODEL_NAMES = ("coulomb6", "coulomb3", "oscillator4", "oscillator2")


@dataclass(frozen=True)
class Integral:
    label: str
    field: PhaseField
    order: int

    @property
    def complex(self) -> bool:
        return self.field.complex


@dataclass(frozen=True)
class SeparablePotential:
    """``V(q) = sum a_i q_i^2 / 2 + sum b_i / q_i^2 - gamma / |q|``.

    Every catalog Hamiltonian is ``|p|^2 / 2 + V(q)`` for some choice of
    coefficients; the compiled integrators only need these numbers.
    """

    quad: tuple[float, ...]
    barrier: tuple[float, ...]
    gamma: float = 0.0

    @property
    def dim(self) -> int:
        return len(self.quad)

    def arrays(self):
        return (
            np.asarray(self.quad, dtype=float),
            np.asarray(self.barrier, dtype=float),
            float(self.gamma),
        )

    def guard_mask(self) -> np.ndarray:
        """Coordinates that appear in a denominator of the force."""
        return np.asarray([b != 0.0 for b in self.barrier], dtype=np.bool_)


@dataclass(frozen=True, eq=False)
class Model:
    name: str
    N: int
    params: dict[str, Any]
    hamiltonian: PhaseField
    integrals: tuple[Integral, ...]
    expected_rank: int
    potential: SeparablePotential
    singular_set: str = ""
    extras: dict[str, PhaseField] = field(default_factory=dict)

    def integral(self, label: str) -> Integral:
        for item in self.integrals:
            if item.label == label:
                return item
        raise KeyError(f"{self.name} has no integral {label!r}; have {self.labels()}")

    def labels(self) -> list[str]:
        return [i.label for i in self.integrals]

    def with_integrals(self, integrals, name: str | None = None) -> "Model":
        return Model(
            name or self.name,
            self.N,
            dict(self.params),
            self.hamiltonian,
            tuple(integrals),
            self.expected_rank,
            self.potential,
            self.singular_set,
            dict(self.extras),
        )

    def descriptor(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "N": self.N,
            "params": dict(self.params),
            "expected_rank": self.expected_rank,
            "integrals": [
                {"label": i.label, "order": i.order, "complex": i.complex} for i in self.integrals
            ],
            "singular_set": self.singular_set,
        }


def _field(fn: Callable, arity: int, name: str, guards=(), complex_: bool = False) -> PhaseField:
    return PhaseField(fn, arity, name, complex_, tuple(guards))


def _nonneg(**values):
    for key, v in values.items():
        if not np.isfinite(v) or v < 0:
            raise ParameterError(f"{key} must be a non-negative real, got {v}")


def _positive_int(**values):
    out = []
    for key, v in values.items():
        if isinstance(v, bool) or int(v) != v or int(v) < 1:
            raise ParameterError(f"{key} must be a positive integer, got {v}")
        out.append(int(v))
    return out


def _positive(**values):
    for key, v in values.items():
        if not (np.isfinite(v) and v > 0):
            raise ParameterError(f"{key} must be positive, got {v}")


def _sum(terms):
    total = 0.0
    for t in terms:
        total = total + t
    return total


# ---------------------------------------------------------------------------
# Coulomb, six dimensions
# ---------------------------------------------------------------------------

def _radius(q):
    return dual.sqrt(_sum(x * x for x in q))


def coulomb6(gamma: float = 1.0) -> Model:
    """Coulomb problem on R^6 with angular momenta and Laplace-Runge-Lenz vector."""
    gamma = float(gamma)
    if not np.isfinite(gamma):
        raise ParameterError("gamma must be finite")
    n = 6
    rg = guard_radius(range(n))

    def H(q, p):
        return 0.5 * _sum(x * x for x in p) - gamma / _radius(q)

    integrals = []
    for i, j in itertools.combinations(range(n), 2):
        integrals.append(Integral(f"L{i + 1}{j + 1}", angular_momentum(n, i, j), 1))
    for i in range(n):
        integrals.append(Integral(f"A{i + 1}", _lrl_component(n, i, gamma), 2))

    return Model(
        name="coulomb6",
        N=n,
        params={"gamma": gamma},
        hamiltonian=_field(H, n, "H6C", rg),
        integrals=tuple(integrals),
        expected_rank=2 * n - 1,
        potential=SeparablePotential((0.0,) * n, (0.0,) * n, gamma),
        singular_set="r = 0",
    )


def angular_momentum(n: int, i: int, j: int) -> PhaseField:
    """``L_ij = q_i p_j - q_j p_i`` on ``2n``-dimensional phase space (0-based)."""
    return _field(lambda q, p: q[i] * p[j] - q[j] * p[i], n, f"L{i + 1}{j + 1}")


def _lrl_component(n: int, i: int, gamma: float) -> PhaseField:
    def A(q, p):
        lsum = _sum(p[j] * (q[i] * p[j] - q[j] * p[i]) for j in range(n) if j != i)
        return lsum - gamma * q[i] / _radius(q)

    return _field(A, n, f"A{i + 1}", guard_radius(range(n)))


# ---------------------------------------------------------------------------
# Coulomb with three barriers (reduced)
# ---------------------------------------------------------------------------

def _coulomb3_guards(k, use_r=True, which=(0, 1, 2)):
    g = tuple(Guard("q", (i,)) for i in which if k[i] != 0.0)
    return g + (guard_radius(range(3)) if use_r else ())


def _barrier_sum(q, k, scale=1.0, which=(0, 1, 2)):
    return _sum(scale * k[i] / (q[i] * q[i]) for i in which if k[i] != 0.0)


def coulomb3_reduced(gamma: float = 1.0, k1: float = 0.3, k2: float = 0.5, k3: float = 0.7) -> Model:
    """Coulomb potential with barriers ``k_i / x_i**2`` in three dimensions.

    Integrals: the quadratic ``I1, I2, I3`` built from cross-plane angular
    momenta, the quartic ``T1, T2, T3`` (planar Laplace-Runge-Lenz squares)
    and their sum ``T``. With ``k3 == 0`` the quadratic integral ``D`` is
    added.
    """
    gamma = float(gamma)
    k = (float(k1), float(k2), float(k3))
    _nonneg(k1=k[0], k2=k[1], k3=k[2])
    if not np.isfinite(gamma):
        raise ParameterError("gamma must be finite")
    n = 3

    def V(q):
        return -gamma / _radius(q) + _barrier_sum(q, k)

    def H(q, p):
        return 0.5 * _sum(x * x for x in p) + V(q)

    integrals = [
        Integral("I1", _cross_plane(k, 0, 1), 2),
        Integral("I2", _cross_plane(k, 0, 2), 2),
        Integral("I3", _cross_plane(k, 1, 2), 2),
        Integral("T", _coulomb_T(gamma, k), 4),
        Integral("T1", _planar_lrl_square(gamma, k, 0), 4),
        Integral("T2", _planar_lrl_square(gamma, k, 1), 4),
        Integral("T3", _planar_lrl_square(gamma, k, 2), 4),
    ]
    if k[2] == 0.0:
        integrals.append(Integral("D", _coulomb_D(gamma, k), 2))

    return Model(
        name="coulomb3",
        N=n,
        params={"gamma": gamma, "k1": k[0], "k2": k[1], "k3": k[2]},
        hamiltonian=_field(H, n, "H3C", _coulomb3_guards(k)),
        integrals=tuple(integrals),
        expected_rank=2 * n - 1,
        potential=SeparablePotential((0.0,) * n, k, gamma),
        singular_set="r = 0 and x_i = 0 for every k_i > 0",
        extras={"T_gamma_r": coulomb_T_gamma_r(gamma, k)},
    )


def _cross_plane(k, i, j) -> PhaseField:
    # sum of the four squared angular momenta linking plane i to plane j
    def f(q, p):
        lij = q[i] * p[j] - q[j] * p[i]
        out = lij * lij
        if k[j] != 0.0:
            out = out + 2.0 * k[j] * q[i] * q[i] / (q[j] * q[j])
        if k[i] != 0.0:
            out = out + 2.0 * k[i] * q[j] * q[j] / (q[i] * q[i])
        return out

    label = {(0, 1): "I1", (0, 2): "I2", (1, 2): "I3"}[(i, j)]
    return _field(f, 3, label, _coulomb3_guards(k, use_r=False, which=(i, j)))


def _radial_parts(q, p, k, gamma):
    r = _radius(q)
    s = _sum(q[i] * p[i] for i in range(3))
    big_p2 = _sum(x * x for x in p) + _barrier_sum(q, k, 2.0)
    return r, s, big_p2


def _planar_lrl_square(gamma, k, i) -> PhaseField:
    def f(q, p):
        r, s, big_p2 = _radial_parts(q, p, k, gamma)
        c = big_p2 - gamma / r
        pi2 = p[i] * p[i]
        if k[i] != 0.0:
            pi2 = pi2 + 2.0 * k[i] / (q[i] * q[i])
        return q[i] * q[i] * c * c - 2.0 * q[i] * p[i] * s * c + pi2 * s * s

    return _field(f, 3, f"T{i + 1}", _coulomb3_guards(k))


def _coulomb_T_generic(gamma, k, inner_gamma, name) -> PhaseField:
    def f(q, p):
        r = _radius(q)
        s = _sum(q[i] * p[i] for i in range(3))
        p2 = _sum(x * x for x in p)
        inner = (2.0 * p2 * r * r - s * s) / (2.0 * r) + 2.0 * r * (
            -inner_gamma / r + _barrier_sum(q, k)
        )
        return inner * inner + gamma * s * s / r - s**4 / (4.0 * r * r)

    return _field(f, 3, name, _coulomb3_guards(k))


def _coulomb_T(gamma, k) -> PhaseField:
    """Closed form of ``T1 + T2 + T3`` (the Coulomb term inside the square is ``gamma / (2 r)``)."""
    return _coulomb_T_generic(gamma, k, 0.5 * gamma, "T")


def coulomb_T_gamma_r(gamma, k) -> PhaseField:
    """Variant of the closed form with ``gamma / r`` inside the square.

    Kept for comparison only: it is not conserved for ``gamma != 0``.
    """
    return _coulomb_T_generic(gamma, tuple(float(v) for v in k), gamma, "T_gamma_r")


def _coulomb_D(gamma, k) -> PhaseField:
    def f(q, p):
        r = _radius(q)
        l1 = q[1] * p[2] - q[2] * p[1]
        l2 = q[2] * p[0] - q[0] * p[2]
        return p[1] * l1 - p[0] * l2 - 2.0 * q[2] * (
            -gamma / (2.0 * r) + _barrier_sum(q, k, which=(0, 1))
        )

    return _field(f, 3, "D", _coulomb3_guards(k, which=(0, 1)))


# ---------------------------------------------------------------------------
# Anisotropic oscillator, four dimensions
# ---------------------------------------------------------------------------

def _z(q, p, nu, j):
    return Cx(p[j], -nu[j] * q[j])


def oscillator4(omega: float = 1.0, n1: int = 1, n2: int = 2) -> Model:
    """Anisotropic oscillator ``|p|^2/2 + omega^2 (n1^2 (x1^2+x2^2) + n2^2 (x3^2+x4^2)) / 2``."""
    omega = float(omega)
    _positive(omega=omega)
    n1, n2 = _positive_int(n1=n1, n2=n2)
    w = Weights((n1, n2), omega)
    nu = w.per_coordinate()
    mult = (n1, n1, n2, n2)
    n = 4

    def H(q, p):
        return 0.5 * _sum(x * x for x in p) + 0.5 * _sum(nu[i] ** 2 * q[i] * q[i] for i in range(n))

    integrals = []
    for i, j in itertools.combinations(range(n), 2):
        if mult[i] == mult[j]:
            integrals.append(Integral(f"L{i + 1}{j + 1}", angular_momentum(n, i, j), 1))
    for i, j in itertools.combinations_with_replacement(range(n), 2):
        if mult[i] == mult[j]:
            integrals.append(Integral(f"T{i + 1}{j + 1}", _tensor_T(nu, i, j), 2))
    for j, kk in itertools.combinations_with_replacement(range(n), 2):
        integrals.append(Integral(f"c{j + 1}{kk + 1}", _jauch_hill(nu, mult, j, kk), mult[j] + mult[kk]))

    return Model(
        name="oscillator4",
        N=n,
        params={"omega": omega, "n1": n1, "n2": n2},
        hamiltonian=_field(H, n, "H4A"),
        integrals=tuple(integrals),
        expected_rank=2 * n - 1,
        potential=SeparablePotential(tuple(float(v) ** 2 for v in nu), (0.0,) * n, 0.0),
        singular_set="none",
    )


def _weights(model: Model) -> Weights:
    return Weights((model.params["n1"], model.params["n2"]), model.params["omega"])


def _tensor_T(nu, i, j) -> PhaseField:
    return _field(lambda q, p: p[i] * p[j] + nu[i] * nu[j] * q[i] * q[j], 4, f"T{i + 1}{j + 1}")


def tensor_T(model: Model, i: int, k: int) -> PhaseField:
    """``T_ik = p_i p_k + n_i n_k omega^2 x_i x_k`` for any 1-based pair.

    Conserved only when both coordinates share a frequency multiplier.
    """
    _require(model, "oscillator4")
    if not (1 <= i <= 4 and 1 <= k <= 4):
        raise IndexError(f"indices must lie in 1..4, got ({i}, {k})")
    return _tensor_T(_weights(model).per_coordinate(), i - 1, k - 1)


def _jauch_hill(nu, mult, j, k) -> PhaseField:
    def f(q, p):
        return _z(q, p, nu, j) ** mult[k] * _z(q, p, nu, k).conj() ** mult[j]

    return _field(f, len(nu), f"c{j + 1}{k + 1}", complex_=True)


def jauch_hill(model: Model, j: int, k: int) -> PhaseField:
    """Complex integral ``c_jk = z_j**n_k * conj(z_k)**n_j`` (1-based ``j, k``).

    Each exponent is the frequency multiplier attached to the other index.
    """
    _require(model, "oscillator4")
    if not (1 <= j <= 4 and 1 <= k <= 4):
        raise IndexError(f"indices must lie in 1..4, got ({j}, {k})")
    w = _weights(model)
    return _jauch_hill(w.per_coordinate(), (w.n[0], w.n[0], w.n[1], w.n[1]), j - 1, k - 1)


def z_variable(model: Model, j: int) -> PhaseField:
    """``z_j = p_j - i n_j omega x_j`` as a complex field (1-based ``j``)."""
    _require(model, "oscillator4")
    if not 1 <= j <= 4:
        raise IndexError(j)
    nu = _weights(model).per_coordinate()
    return _field(lambda q, p: _z(q, p, nu, j - 1), 4, f"z{j}", complex_=True)


def _require(model: Model, name: str):
    if model.name != name:
        raise ParameterError(f"expected a {name} model, got {model.name}")


def invariant_zfields(n1: int = 1, n2: int = 1) -> dict[str, ZField]:
    """Rotation invariants and the integral set built from them, in ``z`` variables."""

    def xi1(z, zb):
        return z[0] * z[0] + z[1] * z[1]

    def xi3(z, zb):
        return z[2] * z[2] + z[3] * z[3]

    def xi1b(z, zb):
        return zb[0] * zb[0] + zb[1] * zb[1]

    def xi3b(z, zb):
        return zb[2] * zb[2] + zb[3] * zb[3]

    def eta1(z, zb):
        return z[0] * zb[0] + z[1] * zb[1]

    def eta2(z, zb):
        return z[2] * zb[2] + z[3] * zb[3]

    out = {
        "xi1": ZField(xi1, 4, "xi1"),
        "xi1bar": ZField(xi1b, 4, "xi1bar"),
        "eta1": ZField(eta1, 4, "eta1"),
        "xi3": ZField(xi3, 4, "xi3"),
        "xi3bar": ZField(xi3b, 4, "xi3bar"),
        "eta2": ZField(eta2, 4, "eta2"),
        "E1": ZField(lambda z, zb: 0.5 * eta1(z, zb), 4, "E1"),
        "E2": ZField(lambda z, zb: 0.5 * eta2(z, zb), 4, "E2"),
        "Q1": ZField(lambda z, zb: xi1(z, zb) ** n2 * xi3b(z, zb) ** n1, 4, "Q1"),
        "Q1bar": ZField(lambda z, zb: xi1b(z, zb) ** n2 * xi3(z, zb) ** n1, 4, "Q1bar"),
        "I1": ZField(lambda z, zb: xi1(z, zb) * xi1b(z, zb), 4, "I1"),
        "I2": ZField(lambda z, zb: xi3(z, zb) * xi3b(z, zb), 4, "I2"),
    }
    return out


def invariant_basis(model: Model) -> list[PhaseField]:
    """The six rotation invariants ``xi1, conj(xi1), eta1, xi3, conj(xi3), eta2``."""
    _require(model, "oscillator4")
    w = _weights(model)
    zf = invariant_zfields(*w.n)
    return [zf[key].on_phase_space(w) for key in ("xi1", "xi1bar", "eta1", "xi3", "xi3bar", "eta2")]


def rotation_invariant_integrals(model: Model) -> list[Integral]:
    """The integrals ``E1, E2, Q1, conj(Q1), I1, I2`` on the full space."""
    _require(model, "oscillator4")
    w = _weights(model)
    n1, n2 = w.n
    zf = invariant_zfields(n1, n2)
    orders = {"E1": 2, "E2": 2, "Q1": 2 * (n1 + n2), "Q1bar": 2 * (n1 + n2), "I1": 4, "I2": 4}
    return [Integral(key, zf[key].on_phase_space(w), orders[key]) for key in orders]


# ---------------------------------------------------------------------------
# Reduced oscillator with Rosochatius barriers
# ---------------------------------------------------------------------------

def oscillator2_reduced(
    omega: float = 1.0, n1: int = 1, n2: int = 2, k1: float = 0.4, k2: float = 0.9
) -> Model:
    """Reduced oscillator ``(p1^2+p2^2)/2 + k1/(2 x1^2) + k2/(2 x2^2) + omega^2 (n1^2 x1^2 + n2^2 x2^2)/2``."""
    omega = float(omega)
    _positive(omega=omega)
    n1, n2 = _positive_int(n1=n1, n2=n2)
    k = (float(k1), float(k2))
    _nonneg(k1=k[0], k2=k[1])
    nu = (n1 * omega, n2 * omega)
    n = 2
    gi = [guard_q(i) if k[i] != 0.0 else () for i in range(2)]
    g = gi[0] + gi[1]

    def energy(i):
        def f(q, p):
            out = 0.5 * p[i] * p[i] + 0.5 * nu[i] ** 2 * q[i] * q[i]
            if k[i] != 0.0:
                out = out + 0.5 * k[i] / (q[i] * q[i])
            return out

        return f

    e1, e2 = energy(0), energy(1)

    def xi(i, sign):
        # reduced image of z_a^2 + z_b^2 (sign=-1) or its conjugate (sign=+1)
        def f(q, p):
            re = p[i] * p[i] - nu[i] ** 2 * q[i] * q[i]
            if k[i] != 0.0:
                re = re + k[i] / (q[i] * q[i])
            return Cx(re, sign * 2.0 * nu[i] * p[i] * q[i])

        return f

    xi1, xi1b, xi3, xi3b = xi(0, -1.0), xi(0, 1.0), xi(1, -1.0), xi(1, 1.0)

    def Q1(q, p):
        return xi1(q, p) ** n2 * xi3b(q, p) ** n1

    def Q1bar(q, p):
        return xi1b(q, p) ** n2 * xi3(q, p) ** n1

    def Q(q, p):
        return Q1(q, p).re

    def I(i):
        x = xi(i, -1.0)
        return lambda q, p: x(q, p).abs2()

    integrals = [
        Integral("E1", _field(e1, n, "E1", gi[0]), 2),
        Integral("E2", _field(e2, n, "E2", gi[1]), 2),
        Integral("Q", _field(Q, n, "Q", g), 2 * (n1 + n2)),
        Integral("Q1", _field(Q1, n, "Q1", g, complex_=True), 2 * (n1 + n2)),
        Integral("Q1bar", _field(Q1bar, n, "Q1bar", g, complex_=True), 2 * (n1 + n2)),
        Integral("I1", _field(I(0), n, "I1", gi[0]), 4),
        Integral("I2", _field(I(1), n, "I2", gi[1]), 4),
    ]
    if n1 == 1 and n2 == 1:
        integrals.append(Integral("Rd", _field(_rd(k), n, "Rd", g), 2))
    if n1 == 1 and n2 == 2 and k[1] == 0.0:
        integrals.append(Integral("Re", _field(_re(k, omega), n, "Re", g), 2))

    def H(q, p):
        return e1(q, p) + e2(q, p)

    return Model(
        name="oscillator2",
        N=n,
        params={"omega": omega, "n1": n1, "n2": n2, "k1": k[0], "k2": k[1]},
        hamiltonian=_field(H, n, "H2A", g),
        integrals=tuple(integrals),
        expected_rank=2 * n - 1,
        potential=SeparablePotential(tuple(v * v for v in nu), (0.5 * k[0], 0.5 * k[1]), 0.0),
        singular_set="x_i = 0 for every k_i > 0",
    )


def _rd(k):
    # second-order integral for n1 = n2 = 1
    def f(q, p):
        ang = p[0] * q[1] - p[1] * q[0]
        out = ang * ang
        if k[0] != 0.0:
            out = out + k[0] * q[1] * q[1] / (q[0] * q[0])
        if k[1] != 0.0:
            out = out + k[1] * q[0] * q[0] / (q[1] * q[1])
        return out

    return f


def _re(k, omega):
    # second-order integral for n1 = 1, n2 = 2, k2 = 0
    def f(q, p):
        out = p[0] * (q[1] * p[0] - q[0] * p[1]) - omega**2 * q[0] * q[0] * q[1]
        if k[0] != 0.0:
            out = out + k[0] * q[1] / (q[0] * q[0])
        return out

    return f


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

_BUILDERS = {
    "coulomb6": coulomb6,
    "coulomb3": coulomb3_reduced,
    "oscillator4": oscillator4,
    "oscillator2": oscillator2_reduced,
}

_INT_PARAMS = {"n1", "n2"}


def default_params(name: str) -> dict[str, Any]:
    import inspect

    builder = _builder(name)
    return {
        key: par.default
        for key, par in inspect.signature(builder).parameters.items()
    }


def _builder(name: str):
    try:
        return _BUILDERS[name]
    except KeyError:
        raise ParameterError(f"unknown model {name!r}; choose from {', '.join(MODEL_NAMES)}") from None


def parse_param(name: str, key: str, raw: str):
    allowed = default_params(name)
    if key not in allowed:
        raise ParameterError(f"{name} has no parameter {key!r}; allowed: {', '.join(allowed)}")
    try:
        value = float(raw)
    except ValueError:
        raise ParameterError(f"parameter {key} expects a number, got {raw!r}") from None
    if key in _INT_PARAMS:
        if value != int(value):
            raise ParameterError(f"parameter {key} expects an integer, got {raw!r}")
        return int(value)
    return value


def get_model(name: str, **params) -> Model:
    """Build a catalog model by name, with defaults for missing parameters."""
    allowed = default_params(name)
    unknown = set(params) - set(allowed)
    if unknown:
        raise ParameterError(f"{name} has no parameter(s) {sorted(unknown)}; allowed: {', '.join(allowed)}")
    return _builder(name)(**params)


def separable_model(quad, barrier=None, gamma: float = 0.0, name: str = "separable") -> Model:
    """A bare ``|p|^2/2 + V(q)`` model with no declared integrals."""
    quad = tuple(float(a) for a in quad)
    barrier = tuple(float(b) for b in (barrier if barrier is not None else [0.0] * len(quad)))
    if len(barrier) != len(quad):
        raise ParameterError("quad and barrier need the same length")
    n = len(quad)
    guards = tuple(Guard("q", (i,)) for i, b in enumerate(barrier) if b != 0.0)
    if gamma != 0.0:
        guards = guards + guard_radius(range(n))

    def H(q, p):
        out = 0.5 * _sum(x * x for x in p) + 0.5 * _sum(quad[i] * q[i] * q[i] for i in range(n))
        for i, b in enumerate(barrier):
            if b != 0.0:
                out = out + b / (q[i] * q[i])
        if gamma != 0.0:
            out = out - gamma / _radius(q)
        return out

    return Model(
        name=name,
        N=n,
        params={"quad": list(quad), "barrier": list(barrier), "gamma": float(gamma)},
        hamiltonian=_field(H, n, "H", guards),
        integrals=(),
        expected_rank=1,
        potential=SeparablePotential(quad, barrier, float(gamma)),
    )
