"""Noncommutative polynomials over GF(2) in the letters P and Q.

A polynomial is a set of words (coefficients are mod 2, so adding a word twice
removes it). Reduction uses P^2 -> P and Q^e -> 0. The rules act on disjoint
letter runs, so the rewriting system is confluent and normal forms are unique.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable

from nilclean.gf2 import DimensionError, Gf2Matrix, add, identity, mul, zero

__all__ = [
    "RuleSet",
    "NcPoly",
    "reduce_word",
    "normal_form",
    "expand_sum_power",
    "derive_identity",
    "derive_eq1",
    "evaluate",
]


@dataclass(frozen=True)
class RuleSet:
    """P is idempotent; Q is nilpotent with Q^nil_index = 0."""

    nil_index: int = 3

    def __post_init__(self):
        if self.nil_index < 1:
            raise ValueError("nilpotency index must be >= 1")


class NcPoly:
    __slots__ = ("words",)

    def __init__(self, words: Iterable[str] = ()):
        acc: set[str] = set()
        for w in words:
            if set(w) - {"P", "Q"}:
                raise ValueError(f"word {w!r} is not over {{P, Q}}")
            acc ^= {w}
        self.words = frozenset(acc)

    @classmethod
    def parse(cls, text: str) -> NcPoly:
        text = text.strip()
        if text == "0" or not text:
            return cls()
        return cls("" if t.strip() == "1" else t.strip() for t in text.split("+"))

    def sorted_words(self) -> list[str]:
        """Length-lexicographic, P < Q."""
        return sorted(self.words, key=lambda w: (len(w), w))

    def __add__(self, other: NcPoly) -> NcPoly:
        return NcPoly._raw(self.words ^ other.words)

    def __mul__(self, other: NcPoly) -> NcPoly:
        return NcPoly(a + b for a in self.words for b in other.words)

    @classmethod
    def _raw(cls, words: frozenset[str]) -> NcPoly:
        obj = cls.__new__(cls)
        obj.words = words
        return obj

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.words == other.words

    def __hash__(self) -> int:
        return hash(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.sorted_words())

    def __str__(self) -> str:
        if not self.words:
            return "0"
        return "+".join(w or "1" for w in self.sorted_words())

    def __repr__(self) -> str:
        return f"NcPoly({self})"


def reduce_word(word: str, rules: RuleSet) -> str | None:
    """Normal form of a single word, or None when it reduces to 0."""
    if "Q" * rules.nil_index in word:
        return None
    return re.sub("P+", "P", word)


def normal_form(x: NcPoly, rules: RuleSet = RuleSet()) -> NcPoly:
    out: set[str] = set()
    for w in x.words:
        r = reduce_word(w, rules)
        if r is not None:
            out ^= {r}
    return NcPoly._raw(frozenset(out))


def expand_sum_power(k: int, rules: RuleSet = RuleSet()) -> NcPoly:
    """Reduced expansion of (P+Q)^k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return normal_form(NcPoly("".join(t) for t in product("PQ", repeat=k)), rules)


def derive_identity(nil_index: int = 3) -> NcPoly:
    """Reduced (P+Q)^4 + (P+Q)^3: the left side of the identity forced when
    t^4 + t^3 + 1 annihilates P + Q."""
    rules = RuleSet(nil_index)
    return normal_form(expand_sum_power(4, rules) + expand_sum_power(3, rules), rules)


def derive_eq1() -> NcPoly:
    return derive_identity(3)


def evaluate(x: NcPoly, p0: Gf2Matrix, q0: Gf2Matrix) -> Gf2Matrix:
    """Substitute matrices for P and Q; the empty word becomes the identity."""
    if p0.shape != q0.shape:
        raise DimensionError(f"P is {p0.shape} but Q is {q0.shape}")
    n = p0.n
    letters = {"P": p0, "Q": q0}
    total = zero(n)
    # memoise prefixes: words share many of them
    cache: dict[str, Gf2Matrix] = {"": identity(n)}

    def value(w: str) -> Gf2Matrix:
        if w not in cache:
            cache[w] = mul(value(w[:-1]), letters[w[-1]])
        return cache[w]

    for w in x.words:
        total = add(total, value(w))
    return total
