"""The commuting subgroups A_s and B_s, their generating sets, and random elements.

Random elements are grown one generator at a time: start from the identity,
multiply on the right by a uniformly chosen signed generator, renormalize, and
stop at the first step whose normal form has length >= M.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import inverse, multiply
from .words import NormalWord

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class GenerationStalled(RuntimeError):
    pass


def mix64(z: int) -> int:
    """SplitMix64 finalizer."""
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SeededRng:
    """SplitMix64 stream.

    Output k (1-based) is ``mix64(seed + k * 0x9E3779B97F4A7C15 mod 2**64)``.
    ``below(n)`` rejects draws at or above the largest multiple of ``n`` and
    returns the remainder, so choices are exactly uniform. ``split(label)``
    derives an independent stream from the seed alone, without consuming output.
    """

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._state = self.seed

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & MASK64
        return mix64(self._state)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def split(self, label: int) -> "SeededRng":
        return SeededRng(mix64((self.seed ^ mix64((label + 1) * GOLDEN_GAMMA & MASK64)) & MASK64))


@dataclass(frozen=True)
class SubgroupParams:
    s: int
    M: int

    def __post_init__(self):
        if self.s < 2:
            raise ValueError(f"s must be at least 2, got {self.s}")
        if self.M < 0:
            raise ValueError(f"M must be non-negative, got {self.M}")


def in_A(w: NormalWord, s: int) -> bool:
    """Membership in A_s, read off the normal form.

    Positive and negative parts have a common length m and, 1-based,
    ``i_k - k < s`` and ``j_k - k < s`` for k = 1..m.
    """
    if len(w.pos) != len(w.neg):
        return False
    return all(i - k < s for k, i in enumerate(w.pos, 1)) and all(
        j - k < s for k, j in enumerate(w.neg, 1)
    )


def in_B(w: NormalWord, s: int) -> bool:
    """Every index is at least s + 1 (rewriting never lowers the minimum index)."""
    return all(part[0] > s for part in (w.pos, w.neg) if part)


def S_A(s: int) -> list[NormalWord]:
    return [NormalWord((0,), (k,)) for k in range(1, s + 1)]


def S_B(s: int) -> list[NormalWord]:
    return [NormalWord((k,), ()) for k in range(s + 1, 2 * s + 1)]


def S_W(s: int) -> list[NormalWord]:
    return [NormalWord((k,), ()) for k in range(0, s + 3)]


def signed(gens: list[NormalWord]) -> list[NormalWord]:
    """``[g1, g1^-1, g2, g2^-1, ...]``; the order fixes what each random draw means."""
    out = []
    for g in gens:
        out.append(g)
        out.append(inverse(g))
    return out


def random_product(alphabet: list[NormalWord], M: int, rng: SeededRng) -> NormalWord:
    u = NormalWord()
    steps = 0
    while len(u) < M:
        if steps >= 64 * max(M, 1):
            raise GenerationStalled(f"no word of length {M} after {steps} multiplications")
        u = multiply(u, alphabet[rng.below(len(alphabet))])
        steps += 1
    return u


def gen_A(params: SubgroupParams, rng: SeededRng) -> NormalWord:
    return random_product(signed(S_A(params.s)), params.M, rng)


def gen_B(params: SubgroupParams, rng: SeededRng) -> NormalWord:
    return random_product(signed(S_B(params.s)), params.M, rng)


def gen_base_word(params: SubgroupParams, rng: SeededRng) -> NormalWord:
    return random_product(signed(S_W(params.s)), params.M, rng)
