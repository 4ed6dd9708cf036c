"""Similarity invariants over GF(2): elementary divisors, invariant factors, Frobenius form.

Invariant factors come from nullity signatures instead of a Smith form over
GF(2)[t]. For an irreducible p of degree d the number of elementary divisors
p^e with e >= j equals (nullity(p(A)^j) - nullity(p(A)^(j-1))) / d.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from nilclean.gf2 import (
    DimensionError,
    Gf2Matrix,
    companion,
    direct_sum,
    eval_poly,
    mul,
    rank,
)
from nilclean.poly import ONE, Gf2Poly, irreducibles_up_to, monic_of_degree

__all__ = [
    "SimilarityClass",
    "elementary_divisors",
    "invariant_factors",
    "minimal_polynomial",
    "frobenius_form",
    "is_similar",
    "enumerate_similarity_classes",
    "chain_label",
]


@dataclass(frozen=True)
class SimilarityClass:
    invariant_factors: tuple[Gf2Poly, ...]

    def __post_init__(self):
        chain = self.invariant_factors
        if not chain:
            raise ValueError("empty invariant-factor chain")
        for f, g in zip(chain, chain[1:]):
            if not f.divides(g):
                raise ValueError(f"{f} does not divide {g}")

    @property
    def n(self) -> int:
        return sum(f.degree for f in self.invariant_factors)

    @property
    def representative(self) -> Gf2Matrix:
        return direct_sum([companion(f) for f in self.invariant_factors])

    @property
    def minimal_polynomial(self) -> Gf2Poly:
        return self.invariant_factors[-1]

    def label(self) -> str:
        return chain_label(self.invariant_factors)


def chain_label(chain) -> str:
    """Chain in the polynomial bit-string format, comma separated."""
    return ",".join(f.to_bitstring() for f in chain)


def _nullity(m: Gf2Matrix) -> int:
    return m.n - rank(m)


def elementary_divisors(a: Gf2Matrix) -> dict[Gf2Poly, list[int]]:
    """Map irreducible p -> exponents of the p-primary elementary divisors, descending."""
    n = a.n
    out: dict[Gf2Poly, list[int]] = {}
    remaining = n
    for p in irreducibles_up_to(max(n, 1)):
        if p.degree > remaining:
            break
        base = eval_poly(p, a)
        nulls = [0]
        power = base
        while True:
            nu = _nullity(power)
            if nu == nulls[-1]:
                break
            nulls.append(nu)
            power = mul(power, base)
        if len(nulls) == 1:
            continue
        d = p.degree
        at_least = [(nulls[j] - nulls[j - 1]) // d for j in range(1, len(nulls))]
        exps: list[int] = []
        for e in range(len(at_least), 0, -1):
            exact = at_least[e - 1] - (at_least[e] if e < len(at_least) else 0)
            exps.extend([e] * exact)
        out[p] = exps
        remaining -= nulls[-1]
    if remaining:
        raise AssertionError("elementary divisors do not account for the full dimension")
    return out


def invariant_factors(a: Gf2Matrix) -> list[Gf2Poly]:
    """Divisor chain f_1 | ... | f_k, ascending."""
    ed = elementary_divisors(a)
    k = max(len(v) for v in ed.values())
    factors = []
    for slot in range(k):
        f = ONE
        for p, exps in ed.items():
            if slot < len(exps):
                f = f * p ** exps[slot]
        factors.append(f)
    factors.reverse()
    return factors


def minimal_polynomial(a: Gf2Matrix) -> Gf2Poly:
    f = invariant_factors(a)[-1]
    if not eval_poly(f, a).is_zero():
        raise AssertionError(f"largest invariant factor {f} does not annihilate the matrix")
    return f


def frobenius_form(a: Gf2Matrix) -> Gf2Matrix:
    return direct_sum([companion(f) for f in invariant_factors(a)])


def is_similar(a: Gf2Matrix, b: Gf2Matrix) -> bool:
    if a.shape != b.shape:
        raise DimensionError(f"cannot compare {a.shape} with {b.shape}")
    return invariant_factors(a) == invariant_factors(b)


def _chains(remaining: int, bound: Gf2Poly | None):
    # largest factor first; each later factor divides the one before it
    if remaining == 0:
        yield ()
        return
    top = remaining if bound is None else min(remaining, bound.degree)
    for d in range(1, top + 1):
        for f in monic_of_degree(d):
            if bound is not None and not f.divides(bound):
                continue
            for tail in _chains(remaining - d, f):
                yield (f,) + tail


def enumerate_similarity_classes(n: int) -> list[SimilarityClass]:
    """One entry per similarity class of M_n(GF(2)), sorted by chain length then factors."""
    if n < 1:
        raise ValueError("n must be >= 1")
    classes = [SimilarityClass(tuple(reversed(c))) for c in _chains(n, None)]
    classes.sort(key=lambda c: (len(c.invariant_factors), [f.sort_key() for f in c.invariant_factors]))
    return classes


def char_poly(a: Gf2Matrix) -> Gf2Poly:
    return reduce(lambda x, y: x * y, invariant_factors(a), ONE)
