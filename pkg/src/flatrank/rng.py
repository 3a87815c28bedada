"""Deterministic splitmix64 generator, specified bit-for-bit.

    state_{i+1} = (state_i + 0x9E3779B97F4A7C15) mod 2^64
    output_i    = mix(state_{i+1})
    mix(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
            z *= 0x94D049BB133111EB; z ^= z >> 31   (all mod 2^64)

``next_below(n)`` is ``next_u64() % n``.  Derived sub-stream j of seed s is
seeded with ``mix((s ^ ((j + 1) * 0x9E3779B97F4A7C15)) mod 2^64)``; the numpy
helpers reproduce the exact same words in bulk.
"""

from __future__ import annotations

import numpy as np

__all__ = ["MASK64", "GOLDEN", "mix64", "Rng", "mix64_np", "stream_words_np", "sub_seeds_np"]

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class Rng:
    """Splitmix64 stream; identical seeds yield identical streams."""

    __slots__ = ("seed", "_state")

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._state = self.seed

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def next_below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("next_below needs a positive bound")
        return self.next_u64() % n

    @staticmethod
    def sub_seed(seed: int, index: int) -> int:
        return mix64((seed ^ ((index + 1) * GOLDEN)) & MASK64)

    def derive(self, index: int) -> "Rng":
        return Rng(self.sub_seed(self.seed, index))

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates driven by next_below."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_without_replacement(self, n: int, k: int) -> list[int]:
        """k distinct values from range(n), in draw order."""
        if k > n:
            raise ValueError("cannot sample more values than the range holds")
        pool = list(range(n))
        out = []
        for i in range(k):
            j = i + self.next_below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
            out.append(pool[i])
        return out


def mix64_np(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def sub_seeds_np(seed: int, indices: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        return mix64_np(np.uint64(seed) ^ ((indices.astype(np.uint64) + np.uint64(1)) * np.uint64(GOLDEN)))


def stream_words_np(sub_seeds: np.ndarray, nwords: int) -> np.ndarray:
    """Row j = the first nwords ``next_u64`` outputs of ``Rng(sub_seeds[j])``."""
    steps = (np.arange(1, nwords + 1, dtype=np.uint64) * np.uint64(GOLDEN))[None, :]
    with np.errstate(over="ignore"):
        return mix64_np(sub_seeds[:, None] + steps)
