"""Small, fully specified pseudo-random generator.

xorshift64* (Vigna 2016): state update ``x ^= x >> 12; x ^= x << 25;
x ^= x >> 27`` and output ``x * 0x2545F4914F6CDD1D mod 2**64``. The 64-bit
state is seeded by one round of splitmix64 (increment
``0x9E3779B97F4A7C15``, multipliers ``0xBF58476D1CE4E5B9`` and
``0x94D049BB133111EB``), so any integer seed, including 0, gives a non-zero
state. Integer arithmetic only, so streams are identical on every platform.
"""

from __future__ import annotations

import math

MASK64 = (1 << 64) - 1
MULT = 0x2545F4914F6CDD1D
GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(value: int) -> int:
    z = (value + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class XorShift64Star:
    __slots__ = ("state", "_spare")

    def __init__(self, seed: int = 0):
        state = splitmix64(int(seed) & MASK64)
        self.state = state or GOLDEN
        self._spare = None

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * MULT) & MASK64

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        return low + (high - low) * self.random()

    def normal(self) -> float:
        """Standard normal deviate (polar Box-Muller)."""
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        while True:
            u = 2.0 * self.random() - 1.0
            v = 2.0 * self.random() - 1.0
            s = u * u + v * v
            if 0.0 < s < 1.0:
                break
        f = math.sqrt(-2.0 * math.log(s) / s)
        self._spare = v * f
        return u * f

    def poisson(self, lam: float) -> int:
        """Poisson deviate; Knuth's product method below 30, rounded normal above."""
        if lam < 0:
            raise ValueError("lam must be non-negative")
        if lam == 0:
            return 0
        if lam < 30.0:
            limit = math.exp(-lam)
            k, p = 0, self.random()
            while p > limit:
                k += 1
                p *= self.random()
            return k
        return max(0, int(math.floor(lam + math.sqrt(lam) * self.normal() + 0.5)))
