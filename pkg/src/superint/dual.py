"""Batched forward-mode dual numbers.

A :class:`Dual` carries values for a batch of ``M`` points together with
``K`` directional derivatives per point (``der`` has shape ``(M, K)``).
Seeding all ``2N`` phase-space directions at once gives the full gradient
in one pass; each direction is propagated independently, exactly as in
single-direction forward mode.

Complex observables are :class:`Cx` pairs of real parts, so every complex
quantity is differentiated through its real and imaginary components.
"""

from __future__ import annotations

import numpy as np


def _is_complex(x) -> bool:
    return isinstance(x, complex) or (isinstance(x, np.ndarray) and np.iscomplexobj(x))


class Dual:
    __slots__ = ("val", "der")
    __array_ufunc__ = None  # ndarray <op> Dual defers to the reflected method

    def __init__(self, val, der):
        self.val = np.asarray(val, dtype=float)
        self.der = np.asarray(der, dtype=float)

    @classmethod
    def variable(cls, values, index: int, ndirs: int) -> "Dual":
        values = np.asarray(values, dtype=float)
        der = np.zeros(values.shape + (ndirs,))
        der[..., index] = 1.0
        return cls(values, der)

    def __repr__(self) -> str:
        return f"Dual(val={self.val!r}, der={self.der!r})"

    # arithmetic -----------------------------------------------------------
    def __neg__(self):
        return Dual(-self.val, -self.der)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.der + other.der)
        if isinstance(other, Cx):
            return NotImplemented
        if _is_complex(other):
            return Cx(self) + other
        return Dual(self.val + other, self.der)

    def __radd__(self, other):
        if _is_complex(other):
            return Cx.lift(other) + self
        return self + other

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.der - other.der)
        if isinstance(other, Cx):
            return NotImplemented
        if _is_complex(other):
            return Cx(self) - other
        return Dual(self.val - other, self.der)

    def __rsub__(self, other):
        if _is_complex(other):
            return Cx.lift(other) - self
        return Dual(other - self.val, -self.der)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(
                self.val * other.val,
                self.der * other.val[..., None] + other.der * self.val[..., None],
            )
        if isinstance(other, Cx):
            return NotImplemented
        if _is_complex(other):
            return Cx(self) * other
        other = np.asarray(other, dtype=float)
        return Dual(self.val * other, self.der * other[..., None])

    def __rmul__(self, other):
        if _is_complex(other):
            return Cx.lift(other) * self
        return self * other

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv = 1.0 / other.val
            val = self.val * inv
            der = (self.der - other.der * val[..., None]) * inv[..., None]
            return Dual(val, der)
        if isinstance(other, Cx):
            return NotImplemented
        if _is_complex(other):
            return Cx(self) / Cx.lift(other)
        other = np.asarray(other, dtype=float)
        return Dual(self.val / other, self.der / other[..., None])

    def __rtruediv__(self, other):
        inv = 1.0 / self.val
        val = other * inv
        return Dual(val, -self.der * (val * inv)[..., None])

    def __pow__(self, exponent):
        if isinstance(exponent, Dual):
            raise TypeError("Dual exponents are not supported")
        if isinstance(exponent, (int, np.integer)):
            n = int(exponent)
            if n == 0:
                return Dual(np.ones_like(self.val), np.zeros_like(self.der))
            if n == 1:
                return self
            if n == 2:
                return self * self
            if n < 0:
                return 1.0 / (self ** (-n))
            return Dual(self.val**n, self.der * (n * self.val ** (n - 1))[..., None])
        e = float(exponent)
        return Dual(self.val**e, self.der * (e * self.val ** (e - 1.0))[..., None])


class Cx:
    """Complex quantity ``re + i*im`` whose parts are real (dual) numbers."""

    __slots__ = ("re", "im")
    __array_ufunc__ = None

    def __init__(self, re, im=0.0):
        self.re = re
        self.im = im

    def __repr__(self) -> str:
        return f"Cx({self.re!r}, {self.im!r})"

    @staticmethod
    def lift(x) -> "Cx":
        if isinstance(x, Cx):
            return x
        if isinstance(x, complex) or np.iscomplexobj(x):
            return Cx(np.real(x), np.imag(x))
        return Cx(x, 0.0)

    def conj(self) -> "Cx":
        return Cx(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def __neg__(self):
        return Cx(-self.re, -self.im)

    def __add__(self, other):
        o = Cx.lift(other)
        return Cx(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = Cx.lift(other)
        return Cx(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return Cx.lift(other) - self

    def __mul__(self, other):
        o = Cx.lift(other)
        return Cx(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (Cx, complex)):
            o = Cx.lift(other)
            den = o.abs2()
            num = self * o.conj()
            return Cx(num.re / den, num.im / den)
        return Cx(self.re / other, self.im / other)

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            raise ValueError("only non-negative integer powers of Cx are supported")
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return Cx(1.0, 0.0) if result is None else result


# elementary functions ------------------------------------------------------

def sqrt(x):
    if isinstance(x, Dual):
        v = np.sqrt(x.val)
        return Dual(v, x.der * (0.5 / v)[..., None])
    return np.sqrt(x)


def sin(x):
    if isinstance(x, Dual):
        return Dual(np.sin(x.val), x.der * np.cos(x.val)[..., None])
    return np.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return Dual(np.cos(x.val), -x.der * np.sin(x.val)[..., None])
    return np.cos(x)


def value_of(x):
    """Plain value of a dual, complex pair, or number."""
    if isinstance(x, Cx):
        return value_of(x.re) + 1j * value_of(x.im)
    if isinstance(x, Dual):
        return x.val
    return x
