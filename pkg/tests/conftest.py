import random

import numpy as np
import pytest
from hypothesis import strategies as st

from nilclean.gf2 import Gf2Matrix, conjugate, direct_sum, identity, rank, zero

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def matrices(draw, min_n=1, max_n=6, n=None):
    if n is None:
        n = draw(st.integers(min_n, max_n))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n))
    return Gf2Matrix(rows, n)


@st.composite
def matrix_pairs(draw, min_n=1, max_n=6, count=2):
    n = draw(st.integers(min_n, max_n))
    return tuple(draw(matrices(n=n)) for _ in range(count))


def random_matrix(rng: random.Random, n: int) -> Gf2Matrix:
    return Gf2Matrix([rng.getrandbits(n) for _ in range(n)], n)


def random_invertible(rng: random.Random, n: int) -> Gf2Matrix:
    while True:
        s = random_matrix(rng, n)
        if rank(s) == n:
            return s


def random_idempotent(rng: random.Random, n: int, r: int | None = None) -> Gf2Matrix:
    if r is None:
        r = rng.randint(0, n)
    canon = direct_sum(identity(r), zero(n - r))
    return conjugate(random_invertible(rng, n), canon)


def random_strict_lower(rng: random.Random, n: int) -> Gf2Matrix:
    return Gf2Matrix([rng.getrandbits(i) if i else 0 for i in range(n)], n)


def random_nilpotent(rng: random.Random, n: int) -> Gf2Matrix:
    return conjugate(random_invertible(rng, n), random_strict_lower(rng, n))


def random_nilpotent_index(rng: random.Random, n: int, k: int) -> Gf2Matrix:
    """Nilpotent with q^k = 0: conjugate of a direct sum of shift blocks of size <= k."""
    sizes = []
    left = n
    while left:
        s = rng.randint(1, min(k, left))
        sizes.append(s)
        left -= s
    blocks = []
    for s in sizes:
        blocks.append(Gf2Matrix([(1 << (i - 1)) if i else 0 for i in range(s)], s))
    return conjugate(random_invertible(rng, n), direct_sum(blocks))


def to_np(a: Gf2Matrix) -> np.ndarray:
    return np.array(a.tolist(), dtype=np.int64).reshape(a.nrows, a.ncols)


def np_rank(m: np.ndarray) -> int:
    """Independent GF(2) rank on a numpy array."""
    m = m.copy() % 2
    r = 0
    rows, cols = m.shape
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
    return r


def all_matrices(n: int):
    mask = (1 << n) - 1
    for x in range(1 << (n * n)):
        yield Gf2Matrix([(x >> (n * i)) & mask for i in range(n)], n)


@pytest.fixture
def rng():
    return random.Random(20261018)
