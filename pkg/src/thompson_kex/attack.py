"""Length-based attack on Alice's token, plus experiment sweeps.

Two searches grow outward from the public word ``w`` and from the token
``w' = a1 w b1``. An edge multiplies a vertex on the left by a signed S_A
generator or on the right by a signed S_B generator. Each side repeatedly
expands its shortest unexpanded vertex, with FIFO order among equal lengths.
The sides alternate, and the search stops when a vertex shows up on both.
"""

from __future__ import annotations

import heapq
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .engine import multiply, normal_form
from .protocol import PrivateKey, ProtocolParams, alice_token
from .subgroups import S_A, S_B, signed
from .words import NormalWord, Word, as_word

SUCCESS = "Success"
EXHAUSTED = "BudgetExhausted"

LEFT, RIGHT = 0, 1

# Words of recently touched vertices kept in memory; older ones are rebuilt
# by replaying the edge labels from the root.
_CACHE_SIZE = 1 << 15


@dataclass(frozen=True)
class AttackBudget:
    """``max_nodes`` caps the vertices stored on both sides together."""

    max_nodes: int = 10**5
    max_seconds: float = math.inf

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_seconds <= 0:
            raise ValueError("budget limits must be positive")


@dataclass
class AttackReport:
    outcome: str
    x1: Optional[Word] = None
    x2: Optional[Word] = None
    x1_generators: list = field(default_factory=list)
    x2_generators: list = field(default_factory=list)
    nodes_expanded: int = 0
    nodes_stored: int = 0
    frontier_sizes: list = field(default_factory=list)
    wall_seconds: float = 0.0

    @property
    def success(self) -> bool:
        return self.outcome == SUCCESS

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "x1": None if self.x1 is None else str(self.x1),
            "x2": None if self.x2 is None else str(self.x2),
            "x1_generators": self.x1_generators,
            "x2_generators": self.x2_generators,
            "nodes_expanded": self.nodes_expanded,
            "nodes_stored": self.nodes_stored,
            "frontier_sizes": self.frontier_sizes,
            "wall_seconds": self.wall_seconds,
        }


def vertex_key(u: NormalWord) -> int:
    """64-bit hash of the canonical index lists.

    Cheap enough for millions of vertices; a meeting vertex is confirmed by
    comparing the actual words, so a collision cannot fake a success.
    """
    return hash((u.pos, u.neg))


class _Side:
    def __init__(self, root: NormalWord):
        self.root_key = vertex_key(root)
        # key -> (parent key, (LEFT|RIGHT, generator number)); root maps to None
        self.parent: dict[int, Optional[tuple]] = {self.root_key: None}
        self.heap = [(len(root), 0, self.root_key)]
        self.counter = 1
        self.cache: dict[int, NormalWord] = {self.root_key: root}

    def word(self, key: int, left, right) -> NormalWord:
        path = []
        k = key
        while k not in self.cache:
            pk, label = self.parent[k]
            path.append(label)
            k = pk
        u = self.cache[k]
        for side, g in reversed(path):
            u = multiply(left[g], u) if side == LEFT else multiply(u, right[g])
        self._remember(key, u)
        return u

    def _remember(self, key, u):
        if len(self.cache) >= _CACHE_SIZE:
            for stale in list(self.cache)[: _CACHE_SIZE // 4]:
                if stale != self.root_key:
                    del self.cache[stale]
        self.cache[key] = u

    def labels(self, key: int) -> list[tuple]:
        """Edge labels from the root to ``key`` in application order."""
        out = []
        while self.parent[key] is not None:
            key, label = self.parent[key]
            out.append(label)
        out.reverse()
        return out


def _flip(g: int) -> int:
    # signed() interleaves generator and inverse.
    return g ^ 1


def _assemble(w_labels, wp_labels):
    # From w:   z = g_k..g_1 w h_1..h_m.
    # From w':  z = c_k..c_1 w' d_1..d_m, hence w' = c_1^-1..c_k^-1 z d_m^-1..d_1^-1.
    lefts = [_flip(g) for side, g in wp_labels if side == LEFT]
    lefts += [g for side, g in reversed(w_labels) if side == LEFT]
    rights = [g for side, g in w_labels if side == RIGHT]
    rights += [_flip(g) for side, g in reversed(wp_labels) if side == RIGHT]
    return lefts, rights


def length_attack(w: NormalWord, w_prime: NormalWord, s: int, budget: AttackBudget,
                  sample_every: int = 64) -> AttackReport:
    start = time.perf_counter()
    left = signed(S_A(s))
    right = signed(S_B(s))
    sides = (_Side(w), _Side(w_prime))
    report = AttackReport(EXHAUSTED)
    meet: Optional[int] = sides[1].root_key if w == w_prime else None
    stored = len(sides[0].parent) + (meet is None)

    def sample():
        report.frontier_sizes.append(
            (report.nodes_expanded, len(sides[0].parent), len(sides[1].parent))
        )

    rounds = 0
    while meet is None:
        if time.perf_counter() - start > budget.max_seconds:
            break
        if rounds % sample_every == 0:
            sample()
        rounds += 1
        for me, other in ((sides[0], sides[1]), (sides[1], sides[0])):
            _, _, key = heapq.heappop(me.heap)
            u = me.word(key, left, right)
            report.nodes_expanded += 1
            children = [((LEFT, g), multiply(x, u)) for g, x in enumerate(left)]
            children += [((RIGHT, g), multiply(u, x)) for g, x in enumerate(right)]
            for label, child in children:
                ck = vertex_key(child)
                if ck in me.parent:
                    continue
                if stored >= budget.max_nodes:
                    break
                me.parent[ck] = (key, label)
                stored += 1
                heapq.heappush(me.heap, (len(child), me.counter, ck))
                me.counter += 1
                if ck in other.parent and other.word(ck, left, right) == child:
                    meet = ck
                    break
            if meet is not None or stored >= budget.max_nodes:
                break
        if stored >= budget.max_nodes:
            break
    sample()
    report.nodes_stored = stored
    report.wall_seconds = time.perf_counter() - start
    if meet is None:
        return report

    lefts, rights = _assemble(sides[0].labels(meet), sides[1].labels(meet))
    report.outcome = SUCCESS
    report.x1 = Word(tuple(x for g in lefts for x in as_word(left[g]).letters))
    report.x2 = Word(tuple(x for g in rights for x in as_word(right[g]).letters))
    report.x1_generators = [str(as_word(left[g])) for g in lefts]
    report.x2_generators = [str(as_word(right[g])) for g in rights]
    return report


def verify(report: AttackReport, w: NormalWord, w_prime: NormalWord, s: int) -> bool:
    """Success invariant: ``x1 w x2`` normalizes to ``w'`` using only the allowed alphabets."""
    if not report.success:
        return False
    a_letters = {x for g in signed(S_A(s)) for x in as_word(g).letters}
    b_letters = {x for g in signed(S_B(s)) for x in as_word(g).letters}
    if not set(report.x1.letters) <= a_letters or not set(report.x2.letters) <= b_letters:
        return False
    return normal_form(report.x1 * as_word(w) * report.x2) == w_prime


@dataclass(frozen=True)
class Instance:
    s: int
    M: int
    seed: int
    w: NormalWord
    w_prime: NormalWord
    key: PrivateKey


def make_instance(s: int, M: int, seed: int) -> Instance:
    """Public word, Alice's key and her token, all from one seed as in the exchange."""
    params = ProtocolParams.generate(s, M, seed)
    key = PrivateKey.generate(params, seed)
    return Instance(s, M, seed, params.w, alice_token(params, key).u, key)


def growth_exponent(frontier_sizes: list) -> float:
    """Least-squares slope of log(stored vertices) against log(expansions)."""
    pts = [(math.log(e), math.log(a + b)) for e, a, b in frontier_sizes if e > 0]
    if len(pts) < 2:
        return float("nan")
    mx = statistics.fmean(x for x, _ in pts)
    my = statistics.fmean(y for _, y in pts)
    sxx = sum((x - mx) ** 2 for x, _ in pts)
    if sxx == 0:
        return float("nan")
    return sum((x - mx) * (y - my) for x, y in pts) / sxx


def _trial(args) -> dict:
    s, M, trial, seed, budget = args
    inst = make_instance(s, M, seed)
    rep = length_attack(inst.w, inst.w_prime, s, budget)
    if rep.success and not verify(rep, inst.w, inst.w_prime, s):
        raise AssertionError(f"unsound attack result for s={s} M={M} seed={seed}")
    return {
        "s": s,
        "M": M,
        "trial": trial,
        "outcome": rep.outcome,
        "nodes": rep.nodes_stored,
        "seconds": round(rep.wall_seconds, 6),
        "expanded": rep.nodes_expanded,
        "growth": growth_exponent(rep.frontier_sizes),
    }


def trial_seed(base_seed: int, s: int, M: int, trial: int) -> int:
    return (base_seed * 1_000_003 + s * 10_007 + M * 101 + trial) & ((1 << 64) - 1)


def attack_sweep(grid: Iterable[tuple[int, int]], trials: int, budget: AttackBudget,
                 seed: int = 0, parallel: int = 1) -> tuple[list[dict], list[dict]]:
    """Run ``trials`` fresh key instances per grid point.

    Returns per-trial rows (``s,M,trial,outcome,nodes,seconds``) and a summary
    per grid point with success rate, median stored vertices over successes,
    and the mean frontier growth exponent.
    """
    grid = [(int(s), int(M)) for s, M in grid]
    jobs = [(s, M, t, trial_seed(seed, s, M, t), budget) for s, M in grid for t in range(trials)]
    if parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            rows = list(pool.map(_trial, jobs))
    else:
        rows = [_trial(j) for j in jobs]

    summary = []
    for s, M in grid:
        mine = [r for r in rows if r["s"] == s and r["M"] == M]
        wins = [r["nodes"] for r in mine if r["outcome"] == SUCCESS]
        growth = [r["growth"] for r in mine if not math.isnan(r["growth"])]
        summary.append({
            "s": s,
            "M": M,
            "trials": len(mine),
            "success_rate": len(wins) / len(mine) if mine else float("nan"),
            "median_nodes": statistics.median(wins) if wins else None,
            "growth_exponent": statistics.fmean(growth) if growth else float("nan"),
        })
    return rows, summary
