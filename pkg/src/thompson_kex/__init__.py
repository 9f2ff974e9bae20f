"""Thompson's group F: almost-linear normal forms, a decomposition-problem key
exchange over the commuting subgroups A_s and B_s, and the length-based attack."""

from .engine import erase_bad_pairs, merge, multiply, normal_form, product, seminormal_form
from .oracle import oracle_normal, oracle_seminormal
from .words import IDENTITY, Letter, NormalWord, SeminormalWord, Word, as_word, concat, invert, shift

__all__ = [
    "IDENTITY",
    "Letter",
    "NormalWord",
    "SeminormalWord",
    "Word",
    "as_word",
    "concat",
    "erase_bad_pairs",
    "invert",
    "merge",
    "multiply",
    "normal_form",
    "oracle_normal",
    "oracle_seminormal",
    "product",
    "seminormal_form",
    "shift",
]
