"""Counter-derived random streams for reproducible, order-independent sampling.

Every sampler draws sample i from substream(seed, i), so results are a pure
function of (parameters, seed, index) and may be generated in any order or
in parallel. The generator is the splitmix64 step/finalizer: 64-bit integer
arithmetic only, so streams are identical on every platform.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

DEFAULT_SEED = 1729


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


class Stream:
    """splitmix64 generator; state advances by a fixed odd constant."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        return _mix(self._state)

    def random(self) -> float:
        """Uniform in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0**-53)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n); n must fit comfortably in 53 bits."""
        return int(self.random() * n)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def poisson(self, lam: float) -> int:
        """Poisson draw by sequential-search inversion.

        For lam > 30 the mean is split additively into <=30 chunks, which is
        exact in law and keeps the inversion loop short.
        """
        if lam < 0:
            raise ValueError("lam must be nonnegative")
        if lam == 0:
            return 0
        if lam > 30:
            chunks = math.ceil(lam / 30)
            return sum(self.poisson(lam / chunks) for _ in range(chunks))
        u = self.random()
        mass = math.exp(-lam)
        acc = mass
        k = 0
        while u >= acc:
            k += 1
            mass *= lam / k
            acc += mass
            if k > 10_000:  # numerically unreachable for lam <= 30
                break
        return k

    def bernoulli(self, p: float) -> bool:
        return self.random() < p

    def binomial(self, n: int, p: float) -> int:
        return sum(1 for _ in range(n) if self.random() < p)


def substream(seed: int, index: int) -> Stream:
    """Independent stream for sample `index` under `seed`."""
    return Stream(_mix((seed & _MASK) ^ _mix((index * _GOLDEN + 1) & _MASK)))
