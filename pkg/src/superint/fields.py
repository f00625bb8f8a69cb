"""Phase-space observables and the Poisson-bracket engine.

Fields are plain Python callables ``fn(q, p)`` receiving per-coordinate
sequences (numpy arrays or :class:`~superint.dual.Dual` numbers) and
returning a real value or a :class:`~superint.dual.Cx` pair. Gradients
come from one batched forward-mode pass; ordering is always
``(d/dq_1 .. d/dq_N, d/dp_1 .. d/dp_N)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .dual import Cx, Dual, value_of
from .errors import DimensionError, DomainError, ParameterError

EPS_DOM = 1e-9


@dataclass(frozen=True)
class PhasePoint:
    """A point ``(q, p)`` of a ``2N``-dimensional canonical phase space."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.atleast_1d(np.asarray(self.q, dtype=float)).copy()
        p = np.atleast_1d(np.asarray(self.p, dtype=float)).copy()
        if q.ndim != 1 or p.ndim != 1 or q.size != p.size or q.size < 1:
            raise DimensionError(f"q and p must be equal-length vectors, got {q.shape} and {p.shape}")
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(p))):
            raise DomainError("phase point has non-finite components")
        q.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def arity(self) -> int:
        return self.q.size

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.q, self.p])

    @classmethod
    def from_vector(cls, v) -> "PhasePoint":
        v = np.asarray(v, dtype=float)
        n = v.size // 2
        return cls(v[:n], v[n:])


@dataclass(frozen=True)
class Weights:
    """Per-pair frequency multipliers ``n`` and base frequency ``omega``."""

    n: tuple[int, ...]
    omega: float

    def __post_init__(self):
        n = tuple(int(k) for k in self.n)
        if any(k < 1 for k in n) or any(k != float(v) for k, v in zip(n, self.n)):
            raise ParameterError(f"frequency multipliers must be positive integers, got {self.n}")
        if not self.omega > 0:
            raise ParameterError(f"omega must be positive, got {self.omega}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "omega", float(self.omega))

    def per_coordinate(self) -> np.ndarray:
        """Frequencies ``n_k * omega`` expanded to ``(n1, n1, n2, n2, ...)``."""
        return np.repeat(np.asarray(self.n, dtype=float), 2) * self.omega


@dataclass(frozen=True)
class Guard:
    """A forbidden denominator: ``|q_i|`` (``kind='q'``) or the norm of ``q[indices]``."""

    kind: str
    indices: tuple[int, ...]

    def magnitude(self, Q: np.ndarray) -> np.ndarray:
        if self.kind == "q":
            return np.abs(Q[:, self.indices[0]])
        return np.sqrt(np.sum(Q[:, list(self.indices)] ** 2, axis=1))


def guard_q(*indices: int) -> tuple[Guard, ...]:
    return tuple(Guard("q", (i,)) for i in indices)


def guard_radius(indices: Sequence[int]) -> tuple[Guard, ...]:
    return (Guard("radius", tuple(indices)),)


@dataclass(frozen=True, eq=False)
class PhaseField:
    """A differentiable scalar observable on ``2N``-dimensional phase space.

    Supports ``+``, ``-``, ``*`` and integer powers with other fields and
    with constants, so derived observables (sums of squares, corrupted
    integrals, rescalings) stay differentiable.
    """

    fn: Callable
    arity: int
    name: str = "f"
    complex: bool = False
    guards: tuple[Guard, ...] = ()

    def __call__(self, q, p):
        return self.fn(q, p)

    # composition -----------------------------------------------------------
    def _combine(self, other, op, symbol):
        if isinstance(other, PhaseField):
            if other.arity != self.arity:
                raise DimensionError(f"cannot combine arity {self.arity} with {other.arity}")
            f, g = self.fn, other.fn
            return PhaseField(
                lambda q, p: op(f(q, p), g(q, p)),
                self.arity,
                f"({self.name}{symbol}{other.name})",
                self.complex or other.complex,
                _merge(self.guards, other.guards),
            )
        c = other
        f = self.fn
        return PhaseField(
            lambda q, p: op(f(q, p), c),
            self.arity,
            f"({self.name}{symbol}{c!r})",
            self.complex or isinstance(c, complex),
            self.guards,
        )

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b, "+")

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b, "-")

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b, "*")

    def __rmul__(self, other):
        return self * other

    def __neg__(self):
        f = self.fn
        return PhaseField(lambda q, p: -f(q, p), self.arity, f"-{self.name}", self.complex, self.guards)

    def __pow__(self, n: int):
        f = self.fn
        return PhaseField(lambda q, p: f(q, p) ** n, self.arity, f"{self.name}^{n}", self.complex, self.guards)

    def real(self) -> "PhaseField":
        f = self.fn
        return PhaseField(lambda q, p: _part(f(q, p), "re"), self.arity, f"Re({self.name})", False, self.guards)

    def imag(self) -> "PhaseField":
        f = self.fn
        return PhaseField(lambda q, p: _part(f(q, p), "im"), self.arity, f"Im({self.name})", False, self.guards)

    def conj(self) -> "PhaseField":
        f = self.fn
        return PhaseField(
            lambda q, p: _conj(f(q, p)), self.arity, f"conj({self.name})", self.complex, self.guards
        )

    def renamed(self, name: str) -> "PhaseField":
        return PhaseField(self.fn, self.arity, name, self.complex, self.guards)


def _merge(a, b):
    out = list(a)
    for g in b:
        if g not in out:
            out.append(g)
    return tuple(out)


def _part(v, which):
    if isinstance(v, Cx):
        return getattr(v, which)
    if which == "re":
        return np.real(v) if isinstance(v, (np.ndarray, complex)) else v
    return np.imag(v) if isinstance(v, (np.ndarray, complex)) else 0.0 * v


def _conj(v):
    if isinstance(v, Cx):
        return v.conj()
    return np.conj(v) if isinstance(v, (np.ndarray, complex)) else v


def coordinate(kind: str, index: int, arity: int) -> PhaseField:
    """The canonical coordinate field ``q_i`` or ``p_i`` (0-based index)."""
    if kind not in ("q", "p"):
        raise ValueError("kind must be 'q' or 'p'")
    if not 0 <= index < arity:
        raise IndexError(index)
    if kind == "q":
        return PhaseField(lambda q, p: q[index], arity, f"q{index + 1}")
    return PhaseField(lambda q, p: p[index], arity, f"p{index + 1}")


def constant(value, arity: int) -> PhaseField:
    return PhaseField(lambda q, p: value, arity, repr(value), isinstance(value, complex))


# batch evaluation ------------------------------------------------------------

def _as_batch(f: PhaseField, Q, P):
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if Q.shape != P.shape or Q.shape[1] != f.arity:
        raise DimensionError(f"field {f.name} has arity {f.arity}; got batches {Q.shape}, {P.shape}")
    return Q, P


def check_domain(f: PhaseField, Q: np.ndarray, eps: float = EPS_DOM) -> None:
    for g in f.guards:
        mag = g.magnitude(Q)
        if np.any(mag < eps):
            bad = int(np.argmin(mag))
            what = f"q{g.indices[0] + 1}" if g.kind == "q" else "radius"
            raise DomainError(
                f"{f.name}: {what} = {mag[bad]:.3e} below {eps:g} at sample {bad}"
            )


def evaluate_batch(f: PhaseField, Q, P, eps: float = EPS_DOM) -> np.ndarray:
    """Values of ``f`` at ``M`` points; ``Q`` and ``P`` have shape ``(M, N)``."""
    Q, P = _as_batch(f, Q, P)
    check_domain(f, Q, eps)
    out = value_of(f.fn(list(Q.T), list(P.T)))
    out = np.broadcast_to(np.asarray(out), (Q.shape[0],))
    return np.array(out, dtype=complex if f.complex else float)


def value_and_gradient_batch(f: PhaseField, Q, P, eps: float = EPS_DOM):
    """Values ``(M,)`` and exact gradients ``(M, 2N)``.

    Complex fields give complex arrays: the real part holds the gradient
    of ``Re f`` and the imaginary part the gradient of ``Im f``.
    """
    Q, P = _as_batch(f, Q, P)
    check_domain(f, Q, eps)
    m, n = Q.shape
    k = 2 * n
    q = [Dual.variable(Q[:, i], i, k) for i in range(n)]
    p = [Dual.variable(P[:, i], n + i, k) for i in range(n)]
    out = f.fn(q, p)
    if isinstance(out, Cx):
        re_v, re_d = _vd(out.re, m, k)
        im_v, im_d = _vd(out.im, m, k)
        return re_v + 1j * im_v, re_d + 1j * im_d
    v, d = _vd(out, m, k)
    if f.complex:
        return v.astype(complex), d.astype(complex)
    return v, d


def _vd(x, m, k):
    if isinstance(x, Dual):
        return (np.broadcast_to(x.val, (m,)).astype(float), np.broadcast_to(x.der, (m, k)).astype(float))
    if np.iscomplexobj(x):
        v = np.broadcast_to(np.asarray(x), (m,))
        return v.copy(), np.zeros((m, k), dtype=complex)
    return np.broadcast_to(np.asarray(x, dtype=float), (m,)).copy(), np.zeros((m, k))


def gradient_batch(f: PhaseField, Q, P, eps: float = EPS_DOM) -> np.ndarray:
    return value_and_gradient_batch(f, Q, P, eps)[1]


def bracket_from_gradients(gf: np.ndarray, gg: np.ndarray) -> np.ndarray:
    """Canonical bracket ``sum dq f dp g - dp f dq g`` row by row."""
    n = gf.shape[-1] // 2
    return np.sum(gf[..., :n] * gg[..., n:], axis=-1) - np.sum(gf[..., n:] * gg[..., :n], axis=-1)


def poisson_bracket_batch(f: PhaseField, g: PhaseField, Q, P, eps: float = EPS_DOM) -> np.ndarray:
    if f.arity != g.arity:
        raise DimensionError(f"bracket of arity {f.arity} with arity {g.arity}")
    return bracket_from_gradients(gradient_batch(f, Q, P, eps), gradient_batch(g, Q, P, eps))


# single-point API ------------------------------------------------------------

def _check_point(f: PhaseField, x: PhasePoint):
    if x.arity != f.arity:
        raise DimensionError(f"field {f.name} has arity {f.arity}, point has {x.arity}")


def evaluate(f: PhaseField, x: PhasePoint, eps: float = EPS_DOM):
    _check_point(f, x)
    v = evaluate_batch(f, x.q[None, :], x.p[None, :], eps)[0]
    return complex(v) if f.complex else float(v)


def gradient(f: PhaseField, x: PhasePoint, eps: float = EPS_DOM) -> np.ndarray:
    _check_point(f, x)
    return gradient_batch(f, x.q[None, :], x.p[None, :], eps)[0]


def fd_gradient(f: PhaseField, x: PhasePoint, h: float = 1e-5, eps: float = EPS_DOM) -> np.ndarray:
    """Central finite differences; the independent oracle for :func:`gradient`."""
    if not h > 0:
        raise ValueError("h must be positive")
    _check_point(f, x)
    base = x.as_vector()
    n = x.arity
    k = 2 * n
    shifts = np.repeat(base[None, :], 2 * k, axis=0)
    for i in range(k):
        shifts[2 * i, i] += h
        shifts[2 * i + 1, i] -= h
    vals = evaluate_batch(f, shifts[:, :n], shifts[:, n:], eps)
    return (vals[0::2] - vals[1::2]) / (2.0 * h)


def poisson_bracket(f: PhaseField, g: PhaseField, x: PhasePoint, eps: float = EPS_DOM):
    _check_point(f, x)
    _check_point(g, x)
    v = poisson_bracket_batch(f, g, x.q[None, :], x.p[None, :], eps)[0]
    return complex(v) if (f.complex or g.complex) else float(v)


# z-variables ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ZField:
    """An observable written in complex variables ``z_j`` and ``conj(z_j)``.

    ``fn(z, zbar)`` receives lists of :class:`Cx` values.
    """

    fn: Callable
    arity: int
    name: str = "f"

    def on_phase_space(self, weights: Weights) -> PhaseField:
        """Compose with the chart ``z_j = p_j - i nu_j q_j``."""
        nu = weights.per_coordinate()
        if nu.size != self.arity:
            raise DimensionError(f"weights cover {nu.size} coordinates, field has {self.arity}")
        fn = self.fn

        def composed(q, p):
            z = [Cx(p[j], -nu[j] * q[j]) for j in range(len(q))]
            return fn(z, [w.conj() for w in z])

        return PhaseField(composed, self.arity, self.name, True)


def z_chart(x: PhasePoint, weights: Weights) -> np.ndarray:
    nu = weights.per_coordinate()
    if nu.size != x.arity:
        raise DimensionError(f"weights cover {nu.size} coordinates, point has {x.arity}")
    return x.p - 1j * nu * x.q


def _wirtinger(f: ZField, z: np.ndarray):
    """``(df/dz_j, df/dzbar_j)`` for ``j = 1..N`` at complex points ``z`` of shape ``(M, N)``."""
    m, n = z.shape
    k = 2 * n
    zs = [
        Cx(Dual.variable(z[:, j].real, j, k), Dual.variable(z[:, j].imag, n + j, k))
        for j in range(n)
    ]
    out = Cx.lift(f.fn(zs, [w.conj() for w in zs]))
    _, dre = _vd(out.re, m, k)
    _, dim = _vd(out.im, m, k)
    grad = dre + 1j * dim  # derivatives of f along Re z_j then Im z_j
    d_a, d_b = grad[:, :n], grad[:, n:]
    return 0.5 * (d_a - 1j * d_b), 0.5 * (d_a + 1j * d_b)


def z_bracket_batch(f: ZField, g: ZField, z: np.ndarray, weights: Weights) -> np.ndarray:
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    n = z.shape[1]
    if f.arity != n or g.arity != n or n % 2:
        raise DimensionError("z_bracket needs an even number of coordinates matching both fields")
    nu = np.repeat(np.asarray(weights.n, dtype=float), 2)
    if nu.size != n:
        raise DimensionError(f"weights cover {nu.size} coordinates, fields have {n}")
    fz, fzb = _wirtinger(f, z)
    gz, gzb = _wirtinger(g, z)
    return -2j * weights.omega * np.sum(nu * (fz * gzb - fzb * gz), axis=1)


def z_bracket(f: ZField, g: ZField, x: PhasePoint, weights: Weights) -> complex:
    """Bracket computed entirely in ``z`` variables with Wirtinger derivatives."""
    z = z_chart(x, weights)
    return complex(z_bracket_batch(f, g, z[None, :], weights)[0])


__all__ = [
    "EPS_DOM",
    "Guard",
    "PhaseField",
    "PhasePoint",
    "Weights",
    "ZField",
    "bracket_from_gradients",
    "check_domain",
    "constant",
    "coordinate",
    "evaluate",
    "evaluate_batch",
    "fd_gradient",
    "gradient",
    "gradient_batch",
    "guard_q",
    "guard_radius",
    "poisson_bracket",
    "poisson_bracket_batch",
    "value_and_gradient_batch",
    "z_bracket",
    "z_bracket_batch",
    "z_chart",
]
