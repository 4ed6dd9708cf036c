"""Univariate polynomials over GF(2), stored as int bitmasks (bit i = coefficient of t^i)."""

from __future__ import annotations

from functools import lru_cache, total_ordering

__all__ = ["Gf2Poly", "T", "ONE", "ZERO", "irreducibles_up_to", "monic_of_degree"]


@total_ordering
class Gf2Poly:
    """Immutable GF(2)[t] element.

    Ordering is by degree, then by the coefficient bits read as an integer;
    this is the canonical order used for invariant-factor chains.
    """

    __slots__ = ("bits",)

    def __init__(self, bits: int = 0):
        if bits < 0:
            raise ValueError("bits must be non-negative")
        self.bits = int(bits)

    @classmethod
    def from_coeffs(cls, coeffs) -> Gf2Poly:
        return cls(sum((int(c) & 1) << i for i, c in enumerate(coeffs)))

    @classmethod
    def from_bitstring(cls, s: str) -> Gf2Poly:
        """Parse the text format: coefficients lowest degree first, e.g. "10011" = t^4+t^3+1."""
        s = s.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"bad polynomial bit string {s!r}")
        return cls.from_coeffs(int(c) for c in s)

    def to_bitstring(self) -> str:
        if not self.bits:
            return "0"
        return "".join(str((self.bits >> i) & 1) for i in range(self.degree + 1))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return self.bits.bit_length() - 1

    def is_zero(self) -> bool:
        return self.bits == 0

    def is_monic(self) -> bool:
        # every nonzero polynomial over GF(2) is monic
        return self.bits != 0

    def coeff(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __add__(self, other: Gf2Poly) -> Gf2Poly:
        return Gf2Poly(self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: Gf2Poly) -> Gf2Poly:
        return Gf2Poly(_clmul(self.bits, other.bits))

    def __pow__(self, e: int) -> Gf2Poly:
        result, base = 1, self.bits
        while e:
            if e & 1:
                result = _clmul(result, base)
            base = _clmul(base, base)
            e >>= 1
        return Gf2Poly(result)

    def __divmod__(self, other: Gf2Poly) -> tuple[Gf2Poly, Gf2Poly]:
        q, r = _divmod(self.bits, other.bits)
        return Gf2Poly(q), Gf2Poly(r)

    def __floordiv__(self, other: Gf2Poly) -> Gf2Poly:
        return divmod(self, other)[0]

    def __mod__(self, other: Gf2Poly) -> Gf2Poly:
        return divmod(self, other)[1]

    def divides(self, other: Gf2Poly) -> bool:
        return (other % self).is_zero()

    def gcd(self, other: Gf2Poly) -> Gf2Poly:
        a, b = self.bits, other.bits
        while b:
            a, b = b, _divmod(a, b)[1]
        return Gf2Poly(a)

    def __call__(self, x):
        """Evaluate at a bit or a matrix."""
        if isinstance(x, int):
            return bin(self.bits).count("1") & 1 if x & 1 else self.bits & 1
        from nilclean.gf2 import eval_poly

        return eval_poly(self, x)

    def sort_key(self) -> tuple[int, int]:
        return self.degree, self.bits

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gf2Poly):
            return NotImplemented
        return self.bits == other.bits

    def __lt__(self, other: Gf2Poly) -> bool:
        return self.sort_key() < other.sort_key()

    def __hash__(self) -> int:
        return hash(("Gf2Poly", self.bits))

    def __repr__(self) -> str:
        return f"Gf2Poly({self})"

    def __str__(self) -> str:
        if not self.bits:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            if (self.bits >> i) & 1:
                terms.append("1" if i == 0 else "t" if i == 1 else f"t^{i}")
        return "+".join(terms)


def _clmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.bit_length()
    q = 0
    while a.bit_length() >= db:
        s = a.bit_length() - db
        q |= 1 << s
        a ^= b << s
    return q, a


T = Gf2Poly(0b10)
ONE = Gf2Poly(1)
ZERO = Gf2Poly(0)


def monic_of_degree(d: int) -> list[Gf2Poly]:
    """All 2^d monic polynomials of degree d, in increasing bit order."""
    top = 1 << d
    return [Gf2Poly(top | low) for low in range(top)]


@lru_cache(maxsize=None)
def _irreducible_bits(d: int) -> tuple[int, ...]:
    found: list[int] = []
    for deg in range(1, d + 1):
        for p in range(1 << deg, 1 << (deg + 1)):
            if all(_divmod(p, f)[1] for f in found if 2 * (f.bit_length() - 1) <= deg):
                found.append(p)
    return tuple(found)


def irreducibles_up_to(d: int) -> list[Gf2Poly]:
    """Monic irreducibles of degree <= d by trial division, ascending."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return [Gf2Poly(b) for b in _irreducible_bits(d)]
