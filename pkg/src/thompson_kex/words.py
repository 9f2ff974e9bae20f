"""Letters, words and (semi)normal forms over the generators x_0, x_1, ... of F.

A word is an arbitrary string of signed generators. A seminormal word has the
shape ``x_{i_1} ... x_{i_s} x_{j_t}^-1 ... x_{j_1}^-1`` with both index lists
non-decreasing; it is stored as the two ascending lists ``pos = (i_1..i_s)``
and ``neg = (j_1..j_t)``. A normal word additionally has no bad pair: whenever
``i`` is in both lists, ``i + 1`` occurs in one of them.

Text syntax is whitespace separated tokens ``x<k>`` / ``x<k>^-1``; the empty
word is written ``1``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

INDEX_CAP = 2**64 - 1

_TOKEN = re.compile(r"x(\d+)(\^-1|\^1|\^\+1)?")


class WordError(ValueError):
    pass


class NegativeIndex(WordError):
    pass


class IndexOverflow(WordError):
    pass


class NotSeminormal(WordError):
    pass


class NotNormal(WordError):
    pass


def _check_index(index: int) -> None:
    if index < 0:
        raise NegativeIndex(f"negative generator index {index}")
    if index > INDEX_CAP:
        raise IndexOverflow(f"generator index {index} exceeds cap {INDEX_CAP}")


class _LetterTuple(NamedTuple):
    index: int
    sign: int


class Letter(_LetterTuple):
    """One occurrence of ``x_index ** sign`` with ``sign`` in {+1, -1}."""

    __slots__ = ()

    def __new__(cls, index: int, sign: int = 1) -> "Letter":
        _check_index(index)
        if sign not in (1, -1):
            raise WordError(f"letter sign must be +1 or -1, got {sign}")
        return super().__new__(cls, index, sign)

    def inverse(self) -> "Letter":
        return Letter(self.index, -self.sign)

    def __str__(self) -> str:
        return f"x{self.index}" if self.sign > 0 else f"x{self.index}^-1"


def _letters(pairs: Iterable[tuple[int, int]]) -> tuple[Letter, ...]:
    return tuple(p if type(p) is Letter else Letter(*p) for p in pairs)


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        if type(self.letters) is not tuple or any(type(x) is not Letter for x in self.letters):
            object.__setattr__(self, "letters", _letters(self.letters))

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse ``"x0 x2^-1"``; an empty string or ``1`` is the identity."""
        letters = []
        for token in text.split():
            if token == "1":
                continue
            m = _TOKEN.fullmatch(token)
            if m is None:
                raise WordError(f"cannot parse token {token!r}")
            letters.append(Letter(int(m.group(1)), -1 if m.group(2) == "^-1" else 1))
        return cls(tuple(letters))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Word":
        return cls(_letters(pairs))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item])
        return self.letters[item]

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __str__(self) -> str:
        return " ".join(map(str, self.letters)) if self.letters else "1"


@dataclass(frozen=True)
class SeminormalWord:
    """Word ``x_{pos[0]} ... x_{pos[-1]} x_{neg[-1]}^-1 ... x_{neg[0]}^-1``."""

    pos: tuple[int, ...] = ()
    neg: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        pos, neg = tuple(self.pos), tuple(self.neg)
        object.__setattr__(self, "pos", pos)
        object.__setattr__(self, "neg", neg)
        for part in (pos, neg):
            if not all(a <= b for a, b in zip(part, part[1:])):
                raise NotSeminormal(f"index list {list(part)} is not non-decreasing")
            if part:
                _check_index(part[0])
                _check_index(part[-1])

    @classmethod
    def _unchecked(cls, pos: Sequence[int], neg: Sequence[int]):
        # Used by the engine on outputs that are correct by construction.
        obj = object.__new__(cls)
        object.__setattr__(obj, "pos", tuple(pos))
        object.__setattr__(obj, "neg", tuple(neg))
        return obj

    def __len__(self) -> int:
        return len(self.pos) + len(self.neg)

    @property
    def is_empty(self) -> bool:
        return not self.pos and not self.neg

    def to_json(self) -> dict:
        return {"pos": list(self.pos), "neg": list(self.neg)}

    def dumps(self) -> str:
        """Canonical compact JSON text, e.g. ``{"pos":[0],"neg":[1]}``."""
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj) -> "SeminormalWord":
        if not isinstance(obj, dict) or set(obj) != {"pos", "neg"}:
            raise WordError(f"expected an object with keys pos and neg, got {obj!r}")
        pos, neg = obj["pos"], obj["neg"]
        for part in (pos, neg):
            if not isinstance(part, list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in part
            ):
                raise WordError(f"index lists must be arrays of integers, got {part!r}")
        return cls(tuple(pos), tuple(neg))

    def __str__(self) -> str:
        return str(as_word(self))


def bad_pairs(pos: Sequence[int], neg: Sequence[int]) -> list[int]:
    """Indices ``i`` present in both parts while ``i + 1`` is absent from both."""
    both = set(pos).intersection(neg)
    if not both:
        return []
    present = set(pos)
    present.update(neg)
    return sorted(i for i in both if i + 1 not in present)


@dataclass(frozen=True)
class NormalWord(SeminormalWord):
    """Canonical representative of an element of F."""

    def __post_init__(self) -> None:
        super().__post_init__()
        bad = bad_pairs(self.pos, self.neg)
        if bad:
            raise NotNormal(f"x{bad[0]} and x{bad[0]}^-1 occur without x{bad[0] + 1}")


IDENTITY = NormalWord()

AnyWord = Union[Word, SeminormalWord]


def shift(w: AnyWord, eps: int):
    """Apply the index shift ``x_i^{+-1} -> x_{i+eps}^{+-1}``."""
    if isinstance(w, SeminormalWord):
        for part in (w.pos, w.neg):
            if part:
                _check_index(part[0] + eps)
                _check_index(part[-1] + eps)
        return type(w)._unchecked([i + eps for i in w.pos], [j + eps for j in w.neg])
    return Word(tuple(Letter(x.index + eps, x.sign) for x in w.letters))


def invert(w: Word) -> Word:
    return Word(tuple(Letter(x.index, -x.sign) for x in reversed(w.letters)))


def concat(u: Word, v: Word) -> Word:
    return Word(u.letters + v.letters)


def as_word(n: SeminormalWord) -> Word:
    letters = [Letter(i, 1) for i in n.pos]
    letters.extend(Letter(j, -1) for j in reversed(n.neg))
    return Word(tuple(letters))


def as_seminormal(w: Word) -> SeminormalWord:
    """Read a word that is already in positive-then-negative sorted shape."""
    k = 0
    letters = w.letters
    while k < len(letters) and letters[k].sign > 0:
        k += 1
    if any(x.sign > 0 for x in letters[k:]):
        raise NotSeminormal(f"{w} is not of the form (positive)(negative)")
    return SeminormalWord(
        tuple(x.index for x in letters[:k]), tuple(x.index for x in reversed(letters[k:]))
    )


def generator(index: int, sign: int = 1) -> Word:
    return Word((Letter(index, sign),))
