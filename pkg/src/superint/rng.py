"""Portable seeded random numbers: xoshiro256** seeded through splitmix64.

The bit stream is fully specified here, so sample sets are reproducible
across platforms and implementations. Each sample point gets its own
stream derived from ``(seed, index)``; serial and parallel runs draw
identical points.
"""

from __future__ import annotations

MASK = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; returns ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK


class Xoshiro256:
    """xoshiro256** generator."""

    __slots__ = ("s",)

    def __init__(self, seed: int):
        state = int(seed) & MASK
        s = []
        for _ in range(4):
            state, out = splitmix64(state)
            s.append(out)
        self.s = s

    @classmethod
    def for_index(cls, seed: int, index: int) -> "Xoshiro256":
        """Independent stream for sample ``index`` under master ``seed``."""
        _, mixed = splitmix64((int(seed) & MASK) ^ _rotl(int(index) & MASK, 32))
        _, mixed = splitmix64(mixed ^ (int(index) & MASK))
        return cls(mixed)

    def next_u64(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & MASK, 7) * 9) & MASK
        t = (s[1] << 17) & MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def uniform(self) -> float:
        """Double in ``[0, 1)`` from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniforms(self, count: int) -> list[float]:
        return [self.uniform() for _ in range(count)]
