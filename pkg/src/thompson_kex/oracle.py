"""Reference normal forms by literal string rewriting.

Slow on purpose: the fast engine is checked against this module, so nothing
here shares code with it. Letters are handled as ``(index, sign)`` pairs.

The rewriting rules, for ``i < k``::

    PP       x_k    x_i     ->  x_i       x_{k+1}
    NP_swap  x_k^-1 x_i     ->  x_i       x_{k+1}^-1
    PN_swap  x_i^-1 x_k     ->  x_{k+1}   x_i^-1
    NN       x_i^-1 x_k^-1  ->  x_{k+1}^-1 x_i^-1
    cancel   x_i^-1 x_i     ->  1
"""

from __future__ import annotations

import enum
import random
from typing import Optional

from .words import NormalWord, SeminormalWord, Word, as_seminormal


class RewriteRule(enum.Enum):
    PP = "PP"
    NP_swap = "NP_swap"
    PN_swap = "PN_swap"
    NN = "NN"
    cancel = "cancel"


def match_rule(a: tuple[int, int], b: tuple[int, int]) -> Optional[RewriteRule]:
    """The rule applicable to the two-letter window ``a b``, if any."""
    (p, sp), (q, sq) = a, b
    if sp > 0 and sq > 0:
        return RewriteRule.PP if q < p else None
    if sp < 0 and sq > 0:
        if p == q:
            return RewriteRule.cancel
        return RewriteRule.NP_swap if q < p else RewriteRule.PN_swap
    if sp < 0 and sq < 0:
        return RewriteRule.NN if p < q else None
    return None


def apply_rule(rule: RewriteRule, a: tuple[int, int], b: tuple[int, int]) -> list[tuple[int, int]]:
    p, q = a[0], b[0]
    if rule is RewriteRule.PP:
        return [(q, 1), (p + 1, 1)]
    if rule is RewriteRule.NP_swap:
        return [(q, 1), (p + 1, -1)]
    if rule is RewriteRule.PN_swap:
        return [(q + 1, 1), (p, -1)]
    if rule is RewriteRule.NN:
        return [(q + 1, -1), (p, -1)]
    return []


def _pairs(w: Word) -> list[tuple[int, int]]:
    return [(x.index, x.sign) for x in w.letters]


def rewrite_leftmost(letters: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Exhaustively apply the leftmost applicable rule.

    After a rewrite at position ``p`` nothing left of ``p - 1`` changed, so
    scanning resumes there; the sequence of rewrites is still leftmost-first.
    """
    w = list(letters)
    p = 0
    while p + 1 < len(w):
        rule = match_rule(w[p], w[p + 1])
        if rule is None:
            p += 1
            continue
        w[p : p + 2] = apply_rule(rule, w[p], w[p + 1])
        p = max(p - 1, 0)
    return w


def rewrite_random(letters: list[tuple[int, int]], rng: random.Random) -> list[tuple[int, int]]:
    """Apply rules at uniformly random applicable positions until reduced."""
    w = list(letters)
    while True:
        spots = [p for p in range(len(w) - 1) if match_rule(w[p], w[p + 1]) is not None]
        if not spots:
            return w
        p = rng.choice(spots)
        w[p : p + 2] = apply_rule(match_rule(w[p], w[p + 1]), w[p], w[p + 1])


def is_reduced(w: Word) -> bool:
    pairs = _pairs(w)
    return all(match_rule(a, b) is None for a, b in zip(pairs, pairs[1:]))


def oracle_seminormal(w: Word) -> SeminormalWord:
    return as_seminormal(Word.from_pairs(rewrite_leftmost(_pairs(w))))


def _worst_bad_pair(pos: list[int], neg: list[int]) -> Optional[tuple[int, int]]:
    present = set(pos) | set(neg)
    for a in range(len(pos) - 1, -1, -1):
        i = pos[a]
        if i + 1 in present:
            continue
        for b in range(len(neg) - 1, -1, -1):
            if neg[b] == i:
                return a, b
    return None


def remove_bad_pairs(u: SeminormalWord) -> NormalWord:
    """Repeatedly cut out the outermost-index bad pair and shift the enclosed segment down."""
    pos, neg = list(u.pos), list(u.neg)
    while (found := _worst_bad_pair(pos, neg)) is not None:
        a, b = found
        pos = pos[:a] + [i - 1 for i in pos[a + 1 :]]
        neg = neg[:b] + [j - 1 for j in neg[b + 1 :]]
    return NormalWord(tuple(pos), tuple(neg))


def oracle_normal(w: Word) -> NormalWord:
    return remove_bad_pairs(oracle_seminormal(w))
