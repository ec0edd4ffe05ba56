"""Seeded 64-bit PRNG used by every randomized routine.

The generator is xorshift64* (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D)
with its state seeded by one splitmix64 step, so a port in another language
reproduces instances bit for bit. Python's `random` is deliberately not used:
its algorithm is an implementation detail of CPython.

Test vectors (seed -> first three `next_u64` outputs) are pinned in
tests/test_rng.py.
"""
from __future__ import annotations

from typing import List, Sequence, TypeVar

MASK64 = (1 << 64) - 1
XS_MULT = 0x2545F4914F6CDD1D
GOLDEN = 0x9E3779B97F4A7C15

T = TypeVar("T")


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (new_state, output)."""
    state = (state + GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


class XorShift64Star:
    """xorshift64* generator with a splitmix64-derived initial state."""

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        _, s = splitmix64(self.seed)
        self.state = s if s != 0 else GOLDEN

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * XS_MULT) & MASK64

    def randbelow(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection on the top bits."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        if bound == 1:
            return 0
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % bound

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range [lo, hi]."""
        return lo + self.randbelow(hi - lo + 1)

    def random(self) -> float:
        """Float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def bernoulli(self, num: int, den: int) -> bool:
        """True with probability num/den, decided in integers."""
        return self.randbelow(den) < num

    def choice(self, seq: Sequence[T]) -> T:
        if not seq:
            raise IndexError("choice from empty sequence")
        return seq[self.randbelow(len(seq))]

    def shuffle(self, items: List[T]) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, seq: Sequence[T], k: int) -> List[T]:
        pool = list(seq)
        if k > len(pool):
            raise ValueError("sample larger than population")
        for i in range(k):
            j = i + self.randbelow(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def fork(self, salt: int) -> "XorShift64Star":
        """Independent child stream, a pure function of (seed, salt)."""
        _, mixed = splitmix64((self.seed ^ ((salt * GOLDEN) & MASK64)) & MASK64)
        return XorShift64Star(mixed)
