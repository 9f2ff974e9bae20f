"""O(n log n) normal forms: merge-based seminormal forms plus one-pass bad-pair erasure.

Index lists follow the storage convention of :class:`~thompson_kex.words.SeminormalWord`:
both the positive part and the negative part are ascending, so position 0 of
each list is the letter nearest the outside of the word for ``pos`` and the
letter at the far right for ``neg``. The pending shifts ``e1``/``e2`` are the
lazy offsets applied to the not-yet-consumed letters of each input.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .words import NormalWord, SeminormalWord, Word, bad_pairs

# Run copying with bisect wins once one input is much shorter than the other.
_GALLOP_RATIO = 8


@dataclass
class EngineStats:
    """Instrumentation for complexity checks.

    ``letter_visits`` counts every input letter read by a merge or by the
    eraser; ``bad_pair_positions`` records ``(a, b)`` positions (0-based in the
    eraser's input lists) of each erased pair in processing order.
    """

    letter_visits: int = 0
    merges: int = 0
    bad_pair_positions: list = field(default_factory=list)


class DeltaStack(list):
    """Pending downward shifts, one entry per letter of the companion accumulator."""

    def bump_top(self) -> None:
        if self:
            self[-1] += 1


def _merge_neg_pos(neg, pos, e1, e2, stats):
    # Word is  delta_e1(neg) delta_e2(pos); the innermost letters are neg[0], pos[0].
    out_pos: list[int] = []
    out_neg: list[int] = []
    t, s = len(neg), len(pos)
    a = b = 0
    while a < t and b < s:
        j = neg[a] + e1
        i = pos[b] + e2
        if j == i:
            a += 1
            b += 1
        elif j < i:
            # x_j^-1 x_i -> x_{i+1} x_j^-1 : the negative letter leaves to the right.
            out_neg.append(j)
            e2 += 1
            a += 1
        else:
            # x_j^-1 x_i -> x_i x_{j+1}^-1 : the positive letter leaves to the left.
            out_pos.append(i)
            e1 += 1
            b += 1
    if b < s:
        out_pos.extend([x + e2 for x in pos[b:]] if e2 else pos[b:])
    if a < t:
        out_neg.extend([x + e1 for x in neg[a:]] if e1 else neg[a:])
    if stats is not None:
        stats.letter_visits += t + s
        stats.merges += 1
    return out_pos, out_neg


def _merge_pos_pos(p1, p2, e1, e2, stats):
    # Word is delta_e1(p1) delta_e2(p2). A letter of p2 smaller than the head of
    # p1 moves left past every remaining p1 letter, raising each of them by one.
    n1, n2 = len(p1), len(p2)
    out: list[int] = []
    a = b = 0
    if n2 * _GALLOP_RATIO < n1:
        while a < n1 and b < n2:
            h2 = p2[b] + e2
            end = bisect_right(p1, h2 - e1, a)
            if end > a:
                out.extend([x + e1 for x in p1[a:end]] if e1 else p1[a:end])
                a = end
                if a == n1:
                    break
            out.append(h2)
            e1 += 1
            b += 1
    else:
        while a < n1 and b < n2:
            h1 = p1[a] + e1
            h2 = p2[b] + e2
            if h1 <= h2:
                out.append(h1)
                a += 1
            else:
                out.append(h2)
                e1 += 1
                b += 1
    if a < n1:
        out.extend([x + e1 for x in p1[a:]] if e1 else p1[a:])
    if b < n2:
        out.extend([x + e2 for x in p2[b:]] if e2 else p2[b:])
    if stats is not None:
        stats.letter_visits += n1 + n2
        stats.merges += 1
    return out


def _merge_neg_neg(n1, n2, e1, e2, stats):
    # Inverting n1 n2 gives the positive word n2^-1 n1^-1 with the same index lists.
    return _merge_pos_pos(n2, n1, e2, e1, stats)


def _merge(p1, n1, p2, n2, stats):
    p2p, n1p = _merge_neg_pos(n1, p2, 0, 0, stats)
    return _merge_pos_pos(p1, p2p, 0, 0, stats), _merge_neg_neg(n1p, n2, 0, 0, stats)


def _seminormal(pairs, lo, hi, stats):
    if hi - lo == 1:
        index, sign = pairs[lo]
        if stats is not None:
            stats.letter_visits += 1
        return ([index], []) if sign > 0 else ([], [index])
    if hi == lo:
        return [], []
    mid = lo + (hi - lo + 1) // 2
    p1, n1 = _seminormal(pairs, lo, mid, stats)
    p2, n2 = _seminormal(pairs, mid, hi, stats)
    return _merge(p1, n1, p2, n2, stats)


def _erase(pos, neg, stats):
    s, t = len(pos), len(neg)
    w1: list[int] = []
    w2: list[int] = []
    st1 = DeltaStack()
    st2 = DeltaStack()
    while s or t:
        if s and (not t or pos[s - 1] > neg[t - 1]):
            s -= 1
            w1.append(pos[s])
            st1.append(0)
        elif t and (not s or neg[t - 1] > pos[s - 1]):
            t -= 1
            w2.append(neg[t])
            st2.append(0)
        else:
            i = pos[s - 1]
            # Current index of the innermost kept neighbour is its stored index
            # minus the top shift; only neighbours that exist are consulted.
            guarded = (w1 and w1[-1] - st1[-1] - i in (0, 1)) or (
                w2 and w2[-1] - st2[-1] - i in (0, 1)
            )
            s -= 1
            t -= 1
            if guarded:
                w1.append(i)
                w2.append(i)
                st1.append(0)
                st2.append(0)
            else:
                if stats is not None:
                    stats.bad_pair_positions.append((s, t))
                st1.bump_top()
                st2.bump_top()
    if stats is not None:
        stats.letter_visits += len(pos) + len(neg)
    return _replay(w1, st1), _replay(w2, st2)


def _replay(acc, stack):
    # Pop from the top (innermost-last pushed = smallest) while accumulating shifts.
    out = []
    delta = 0
    for k in range(len(acc) - 1, -1, -1):
        delta += stack[k]
        out.append(acc[k] - delta)
    return out


def merge_neg_pos(n: Sequence[int], p: Sequence[int], eps1: int = 0, eps2: int = 0,
                  stats: Optional[EngineStats] = None) -> SeminormalWord:
    """Seminormal form of ``shift(n^-1 part, eps1) * shift(p, eps2)``.

    ``n`` lists the indices of the negative word in ascending order, ``p`` those
    of the positive word.
    """
    pos, neg = _merge_neg_pos(list(n), list(p), eps1, eps2, stats)
    return SeminormalWord(pos, neg)


def merge_pos_pos(p1: Sequence[int], p2: Sequence[int], eps1: int = 0, eps2: int = 0,
                  stats: Optional[EngineStats] = None) -> SeminormalWord:
    return SeminormalWord(_merge_pos_pos(list(p1), list(p2), eps1, eps2, stats), ())


def merge_neg_neg(n1: Sequence[int], n2: Sequence[int], eps1: int = 0, eps2: int = 0,
                  stats: Optional[EngineStats] = None) -> SeminormalWord:
    return SeminormalWord((), _merge_neg_neg(list(n1), list(n2), eps1, eps2, stats))


def merge(w1: SeminormalWord, w2: SeminormalWord, stats: Optional[EngineStats] = None) -> SeminormalWord:
    pos, neg = _merge(list(w1.pos), list(w1.neg), list(w2.pos), list(w2.neg), stats)
    return SeminormalWord._unchecked(pos, neg)


def seminormal_form(w: Word, stats: Optional[EngineStats] = None) -> SeminormalWord:
    pairs = w.letters
    pos, neg = _seminormal(pairs, 0, len(pairs), stats)
    return SeminormalWord._unchecked(pos, neg)


def erase_bad_pairs(u: SeminormalWord, stats: Optional[EngineStats] = None) -> NormalWord:
    pos, neg = _erase(u.pos, u.neg, stats)
    return NormalWord._unchecked(pos, neg)


def normal_form(w: Word, stats: Optional[EngineStats] = None) -> NormalWord:
    return erase_bad_pairs(seminormal_form(w, stats), stats)


def multiply(u: SeminormalWord, v: SeminormalWord) -> NormalWord:
    """Normal form of ``u * v`` via a single merge (linear in ``|u| + |v|``)."""
    pos, neg = _merge(list(u.pos), list(u.neg), list(v.pos), list(v.neg), None)
    if bad_pairs(pos, neg):
        pos, neg = _erase(pos, neg, None)
    return NormalWord._unchecked(pos, neg)


def product(*factors: SeminormalWord) -> NormalWord:
    result = NormalWord()
    for f in factors:
        result = multiply(result, f)
    return result


def inverse(u: SeminormalWord) -> NormalWord:
    """Inverse of a normal form: swap the parts (bad-pair freedom is symmetric)."""
    if isinstance(u, NormalWord):
        return NormalWord._unchecked(u.neg, u.pos)
    return erase_bad_pairs(SeminormalWord._unchecked(u.neg, u.pos))

