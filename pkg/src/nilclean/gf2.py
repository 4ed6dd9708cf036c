"""Dense matrices over GF(2) with bit-packed rows.

Row ``i`` is stored as a Python int; bit ``j`` holds entry ``(i, j)``
(0-based internally, 1-based in text formats and docs). Row XOR,
elimination and products all become word operations on those ints.

Matrices are immutable values. Most operations expect square input, but
``block_split`` produces rectangular off-diagonal blocks, so the type
carries an explicit column count.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

__all__ = [
    "DimensionError",
    "SingularMatrixError",
    "Gf2Matrix",
    "zero",
    "identity",
    "from_entries",
    "from_rows",
    "matrix_c",
    "direct_sum",
    "companion",
    "shift",
    "unit",
    "add",
    "mul",
    "mat_pow",
    "trace",
    "rank",
    "corank",
    "inverse",
    "conjugate",
    "eval_poly",
    "is_idempotent",
    "is_nilpotent_index",
    "block_split",
    "block_join",
    "canonicalize_idempotent",
    "image_basis",
    "kernel_basis",
    "parse_matrix",
    "format_matrix",
]


class DimensionError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


def _set_bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class Gf2Matrix:
    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[int], ncols: int | None = None):
        rows = tuple(rows)
        nrows = len(rows)
        if ncols is None:
            ncols = nrows
        mask = (1 << ncols) - 1
        for r in rows:
            if r < 0 or r & ~mask:
                raise ValueError(f"row {r:#x} has bits outside {ncols} columns")
        self.rows = rows
        self.nrows = nrows
        self.ncols = ncols
        self._hash = hash((rows, ncols))

    @property
    def n(self) -> int:
        if self.nrows != self.ncols:
            raise DimensionError(f"{self.nrows}x{self.ncols} matrix is not square")
        return self.nrows

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def entry(self, i: int, j: int) -> int:
        """Entry at 0-based position (i, j)."""
        return (self.rows[i] >> j) & 1

    def column(self, j: int) -> int:
        return sum(((r >> j) & 1) << i for i, r in enumerate(self.rows))

    def transpose(self) -> Gf2Matrix:
        return Gf2Matrix((self.column(j) for j in range(self.ncols)), self.nrows)

    def tolist(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def row_strings(self) -> list[str]:
        return ["".join("1" if (r >> j) & 1 else "0" for j in range(self.ncols)) for r in self.rows]

    def bitstring(self) -> str:
        """Rows concatenated, entry (1,1) first."""
        return "".join(self.row_strings())

    def sort_key(self) -> int:
        """Integer whose order is the lexicographic order of ``bitstring``."""
        s = self.bitstring()
        return int(s, 2) if s else 0

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __hash__(self) -> int:
        return self._hash

    def __add__(self, other: Gf2Matrix) -> Gf2Matrix:
        return add(self, other)

    def __matmul__(self, other: Gf2Matrix) -> Gf2Matrix:
        return mul(self, other)

    def __pow__(self, e: int) -> Gf2Matrix:
        return mat_pow(self, e)

    def __repr__(self) -> str:
        body = ",".join(self.row_strings())
        return f"Gf2Matrix({self.nrows}x{self.ncols}: {body})"

    def __str__(self) -> str:
        return "\n".join(self.row_strings())


# -- constructors -----------------------------------------------------------

def zero(n: int, ncols: int | None = None) -> Gf2Matrix:
    if n < 0:
        raise ValueError("dimension must be non-negative")
    return Gf2Matrix([0] * n, n if ncols is None else ncols)


def identity(n: int) -> Gf2Matrix:
    if n < 0:
        raise ValueError("dimension must be non-negative")
    return Gf2Matrix(1 << i for i in range(n))


def from_entries(n: int, bits: Sequence[Sequence[int]] | Sequence[int] | str) -> Gf2Matrix:
    """Build an n x n matrix from nested rows, a flat row-major list, or a bit string."""
    if isinstance(bits, str):
        flat = [int(c) for c in bits if not c.isspace()]
    elif bits and isinstance(bits[0], (list, tuple, str)):
        flat = [int(b) for row in bits for b in row]
    else:
        flat = [int(b) for b in bits]
    if len(flat) != n * n:
        raise DimensionError(f"expected {n * n} entries, got {len(flat)}")
    if any(b not in (0, 1) for b in flat):
        raise ValueError("entries must be 0 or 1")
    rows = []
    for i in range(n):
        rows.append(sum(b << j for j, b in enumerate(flat[i * n:(i + 1) * n])))
    return Gf2Matrix(rows, n)


def from_rows(*rows: str) -> Gf2Matrix:
    """``from_rows("0001", "1000", ...)``; each string is one row, column 1 first."""
    ncols = len(rows[0]) if rows else 0
    out = []
    for s in rows:
        if len(s) != ncols or set(s) - {"0", "1"}:
            raise ValueError(f"bad row {s!r}")
        out.append(sum(1 << j for j, c in enumerate(s) if c == "1"))
    return Gf2Matrix(out, ncols)


def matrix_c() -> Gf2Matrix:
    """The 4x4 companion matrix of t^4 + t^3 + 1."""
    return from_rows("0001", "1000", "0100", "0011")


def direct_sum(*blocks: Gf2Matrix | Sequence[Gf2Matrix]) -> Gf2Matrix:
    if len(blocks) == 1 and not isinstance(blocks[0], Gf2Matrix):
        blocks = tuple(blocks[0])
    if not blocks:
        raise ValueError("direct_sum needs at least one block")
    rows: list[int] = []
    offset = 0
    for b in blocks:
        rows.extend(r << offset for r in b.rows)
        offset += b.ncols
    return Gf2Matrix(rows, offset)


def companion(p) -> Gf2Matrix:
    """Companion matrix: ones on the subdiagonal, coefficients c_0..c_{d-1} in the last column."""
    bits = p.bits if hasattr(p, "bits") else int(p)
    d = bits.bit_length() - 1
    if d < 1:
        raise ValueError("companion needs a monic polynomial of degree >= 1")
    last = 1 << (d - 1)
    rows = []
    for i in range(d):
        r = (1 << (i - 1)) if i > 0 else 0
        if (bits >> i) & 1:
            r |= last
        rows.append(r)
    return Gf2Matrix(rows, d)


def shift(n: int) -> Gf2Matrix:
    """Superdiagonal shift: ones at (i, i+1)."""
    return Gf2Matrix(((1 << (i + 1)) if i + 1 < n else 0) for i in range(n))


def unit(n: int, i: int, j: int) -> Gf2Matrix:
    """Single-entry matrix E_ij (0-based)."""
    rows = [0] * n
    rows[i] = 1 << j
    return Gf2Matrix(rows, n)


# -- arithmetic -------------------------------------------------------------

def add(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    if a.shape != b.shape:
        raise DimensionError(f"cannot add {a.shape} and {b.shape}")
    return Gf2Matrix((x ^ y for x, y in zip(a.rows, b.rows)), a.ncols)


def _mul_rows(arows: Sequence[int], brows: Sequence[int]) -> list[int]:
    out = []
    for r in arows:
        acc = 0
        while r:
            low = r & -r
            acc ^= brows[low.bit_length() - 1]
            r ^= low
        out.append(acc)
    return out


def mul(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    if a.ncols != b.nrows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return Gf2Matrix(_mul_rows(a.rows, b.rows), b.ncols)


def mat_pow(a: Gf2Matrix, e: int) -> Gf2Matrix:
    if e < 0:
        raise ValueError("exponent must be non-negative")
    n = a.n
    result = list(identity(n).rows)
    base = list(a.rows)
    while e:
        if e & 1:
            result = _mul_rows(result, base)
        e >>= 1
        if e:
            base = _mul_rows(base, base)
    return Gf2Matrix(result, n)


def trace(a: Gf2Matrix) -> int:
    t = 0
    for i, r in enumerate(a.rows):
        t ^= (r >> i) & 1
    return t


def _echelon(rows: Iterable[int]) -> dict[int, int]:
    """XOR basis keyed by leading (highest) bit."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            hb = r.bit_length() - 1
            if hb in basis:
                r ^= basis[hb]
            else:
                basis[hb] = r
                break
    return basis


def rank(a: Gf2Matrix) -> int:
    return len(_echelon(a.rows))


def corank(a: Gf2Matrix) -> int:
    return a.n - rank(a)


def inverse(a: Gf2Matrix) -> Gf2Matrix:
    n = a.n
    aug = [r | (1 << (n + i)) for i, r in enumerate(a.rows)]
    for col in range(n):
        bit = 1 << col
        piv = next((i for i in range(col, n) if aug[i] & bit), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular over GF(2)")
        aug[col], aug[piv] = aug[piv], aug[col]
        prow = aug[col]
        for i in range(n):
            if i != col and aug[i] & bit:
                aug[i] ^= prow
    return Gf2Matrix((r >> n for r in aug), n)


def conjugate(s: Gf2Matrix, a: Gf2Matrix) -> Gf2Matrix:
    """s a s^-1."""
    if s.shape != a.shape:
        raise DimensionError(f"cannot conjugate {a.shape} by {s.shape}")
    return mul(mul(s, a), inverse(s))


def eval_poly(p, a: Gf2Matrix) -> Gf2Matrix:
    """Horner evaluation of a GF(2) polynomial (``Gf2Poly`` or int bitmask) at ``a``."""
    bits = p.bits if hasattr(p, "bits") else int(p)
    n = a.n
    result = [0] * n
    for i in range(bits.bit_length() - 1, -1, -1):
        result = _mul_rows(result, a.rows)
        if (bits >> i) & 1:
            result = [r ^ (1 << d) for d, r in enumerate(result)]
    return Gf2Matrix(result, n)


def is_idempotent(a: Gf2Matrix) -> bool:
    return a.is_square and mul(a, a) == a


def is_nilpotent_index(a: Gf2Matrix, k: int) -> bool:
    """True iff a^k = 0."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return mat_pow(a, k).is_zero()


# -- blocks -----------------------------------------------------------------

def block_split(a: Gf2Matrix, alpha: int) -> tuple[Gf2Matrix, Gf2Matrix, Gf2Matrix, Gf2Matrix]:
    """Split into (Q1, Q2, Q3, Q4) with Q4 the bottom-right alpha x alpha block."""
    n = a.n
    if not 0 <= alpha <= n:
        raise ValueError(f"alpha={alpha} out of range for n={n}")
    m = n - alpha
    lo = (1 << m) - 1
    top, bottom = a.rows[:m], a.rows[m:]
    q1 = Gf2Matrix((r & lo for r in top), m)
    q2 = Gf2Matrix((r >> m for r in top), alpha)
    q3 = Gf2Matrix((r & lo for r in bottom), m)
    q4 = Gf2Matrix((r >> m for r in bottom), alpha)
    return q1, q2, q3, q4


def block_join(q1: Gf2Matrix, q2: Gf2Matrix, q3: Gf2Matrix, q4: Gf2Matrix) -> Gf2Matrix:
    m, alpha = q1.nrows, q4.nrows
    if q1.shape != (m, m) or q2.shape != (m, alpha) or q3.shape != (alpha, m) or q4.shape != (alpha, alpha):
        raise DimensionError("incompatible block shapes")
    rows = [r1 | (r2 << m) for r1, r2 in zip(q1.rows, q2.rows)]
    rows += [r3 | (r4 << m) for r3, r4 in zip(q3.rows, q4.rows)]
    return Gf2Matrix(rows, m + alpha)


# -- subspaces --------------------------------------------------------------

def image_basis(a: Gf2Matrix) -> list[int]:
    """Column-space basis, greedy over columns in index order (vectors as ints, bit i = coordinate i)."""
    basis: list[int] = []
    reduced: dict[int, int] = {}
    for j in range(a.ncols):
        col = a.column(j)
        v = col
        while v:
            hb = v.bit_length() - 1
            if hb in reduced:
                v ^= reduced[hb]
            else:
                reduced[hb] = v
                basis.append(col)
                break
    return basis


def kernel_basis(a: Gf2Matrix) -> list[int]:
    """Null-space basis of ``a`` acting on column vectors, free columns in index order."""
    n = a.ncols
    rows = list(a.rows)
    pivots: list[int] = []
    r = 0
    for col in range(n):
        bit = 1 << col
        piv = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = 1 << f
        for i, pc in enumerate(pivots):
            if (rows[i] >> f) & 1:
                v |= 1 << pc
        basis.append(v)
    return basis


def canonicalize_idempotent(p: Gf2Matrix) -> Gf2Matrix:
    """Invertible S with S p S^-1 = diag(I_r, 0).

    Columns of S^-1 are the image basis of p followed by its kernel basis.
    """
    if not is_idempotent(p):
        raise ValueError("input is not idempotent")
    cols = image_basis(p) + kernel_basis(p)
    n = p.n
    if len(cols) != n:
        raise AssertionError("image and kernel do not span")
    s_inv = Gf2Matrix((sum(((c >> i) & 1) << j for j, c in enumerate(cols)) for i in range(n)), n)
    return inverse(s_inv)


# -- text format ------------------------------------------------------------

def parse_matrix(text: str) -> Gf2Matrix:
    """Parse the matrix text format: a line with n, then n rows of n characters from {0,1}."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"first line must be the dimension, got {lines[0]!r}") from None
    if n < 1:
        raise ValueError("dimension must be positive")
    body = lines[1:]
    if len(body) != n:
        raise ValueError(f"expected {n} rows, got {len(body)}")
    for ln in body:
        if len(ln) != n or set(ln) - {"0", "1"}:
            raise ValueError(f"bad row {ln!r}")
    return from_rows(*body)


def format_matrix(a: Gf2Matrix) -> str:
    return f"{a.n}\n" + "".join(s + "\n" for s in a.row_strings())
