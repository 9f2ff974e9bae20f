"""Letter-visit and wall-clock measurements of the normal-form engine."""

from __future__ import annotations

import math
import time

from .engine import EngineStats, normal_form
from .subgroups import SeededRng
from .words import Letter, Word


def random_word(length: int, rng: SeededRng, max_index: int = 9) -> Word:
    """Uniform letters over x_0^{+-1} .. x_max_index^{+-1}."""
    span = 2 * (max_index + 1)
    letters = []
    for _ in range(length):
        r = rng.below(span)
        letters.append(Letter(r >> 1, -1 if r & 1 else 1))
    return Word(tuple(letters))


def measure(length: int, rng: SeededRng) -> dict:
    w = random_word(length, rng)
    stats = EngineStats()
    t0 = time.perf_counter_ns()
    nf = normal_form(w, stats)
    elapsed = time.perf_counter_ns() - t0
    return {
        "length": length,
        "letter_visits": stats.letter_visits,
        "nanoseconds": elapsed,
        "nf_length": len(nf),
    }


def bench_nf(min_exp: int = 10, max_exp: int = 20, seed: int = 0) -> list[dict]:
    rng = SeededRng(seed)
    return [measure(1 << e, rng.split(e)) for e in range(min_exp, max_exp + 1)]


def visit_constant(row: dict) -> float:
    """V(n) / (n log2 n)."""
    n = row["length"]
    return row["letter_visits"] / (n * math.log2(n))
