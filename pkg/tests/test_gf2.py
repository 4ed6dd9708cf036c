import numpy as np
import pytest
from hypothesis import given, settings

from conftest import (
    all_matrices,
    matrices,
    matrix_pairs,
    np_rank,
    random_idempotent,
    random_invertible,
    random_matrix,
    random_nilpotent,
    to_np,
)
from nilclean.gf2 import (
    DimensionError,
    Gf2Matrix,
    SingularMatrixError,
    add,
    block_join,
    block_split,
    canonicalize_idempotent,
    companion,
    conjugate,
    direct_sum,
    eval_poly,
    format_matrix,
    from_entries,
    from_rows,
    identity,
    inverse,
    is_idempotent,
    is_nilpotent_index,
    mat_pow,
    matrix_c,
    mul,
    parse_matrix,
    rank,
    shift,
    trace,
    unit,
    zero,
)
from nilclean.poly import Gf2Poly

C = matrix_c()


def test_matrix_c_rows():
    assert C.row_strings() == ["0001", "1000", "0100", "0011"]
    assert C.entry(3, 3) == 1 and C.entry(0, 3) == 1


def test_companion_reproduces_c():
    assert companion(Gf2Poly.from_bitstring("10011")) == C
    assert companion(Gf2Poly(0b111)) == from_rows("01", "11")


def test_companion_rejects_constants():
    with pytest.raises(ValueError):
        companion(Gf2Poly(1))
    with pytest.raises(ValueError):
        companion(Gf2Poly(0))


def test_direct_sum():
    assert direct_sum(identity(1), identity(1)) == identity(2)
    assert direct_sum([C]) == C
    with pytest.raises(ValueError):
        direct_sum([])
    cc = direct_sum(C, C)
    assert block_split(cc, 4) == (C, zero(4), zero(4), C)


def test_from_entries_forms():
    a = from_entries(2, [[1, 0], [1, 1]])
    assert a == from_entries(2, [1, 0, 1, 1]) == from_entries(2, "1011")
    with pytest.raises(DimensionError):
        from_entries(2, [1, 0, 1])


def test_add_examples():
    assert add(C, C) == zero(4)
    assert add(identity(2), zero(2)) == identity(2)
    assert add(from_rows("10", "01"), from_rows("11", "00")) == from_rows("01", "01")
    with pytest.raises(DimensionError):
        add(identity(2), identity(3))


def test_mul_examples():
    assert mul(identity(4), C) == C
    e1 = unit(4, 0, 0)
    # first column of C e1 is e2
    assert mul(C, e1).column(0) == 0b0010
    assert mul(unit(2, 0, 1), unit(2, 1, 0)) == unit(2, 0, 0)
    with pytest.raises(DimensionError):
        mul(identity(2), identity(3))


def test_pow_examples():
    assert mat_pow(C, 0) == identity(4)
    assert mat_pow(shift(3), 3) == zero(3)
    assert mat_pow(C, 4) == add(mat_pow(C, 3), identity(4))


def test_trace_examples():
    assert trace(C) == 1
    assert trace(identity(4)) == 0
    assert trace(direct_sum(C, C, C)) == 1


def test_rank_examples():
    assert rank(zero(4)) == 0
    assert rank(C) == 4
    assert rank(direct_sum(identity(2), zero(2))) == 2


def test_inverse_examples():
    assert inverse(identity(3)) == identity(3)
    assert inverse(C) == add(mat_pow(C, 3), mat_pow(C, 2))
    with pytest.raises(SingularMatrixError):
        inverse(from_rows("11", "11"))


def test_conjugate_examples():
    swap = from_rows("01", "10")
    assert conjugate(identity(4), C) == C
    assert conjugate(swap, from_rows("00", "01")) == from_rows("10", "00")
    with pytest.raises(SingularMatrixError):
        conjugate(zero(2), identity(2))


def test_eval_poly_examples():
    assert eval_poly(Gf2Poly.from_bitstring("10011"), C) == zero(4)
    assert eval_poly(Gf2Poly(1), C) == identity(4)
    assert eval_poly(Gf2Poly(0b10), C) == C


def test_predicates():
    assert is_idempotent(direct_sum(identity(2), zero(2)))
    assert not is_idempotent(C)
    assert is_nilpotent_index(shift(3), 3)
    assert not is_nilpotent_index(shift(3), 2)
    assert not any(is_nilpotent_index(C, k) for k in range(1, 20))


def test_block_split_examples():
    assert block_split(identity(4), 2) == (identity(2), zero(2), zero(2), identity(2))
    q1, q2, q3, q4 = block_split(C, 0)
    assert q1 == C and q2.shape == (4, 0) and q3.shape == (0, 4) and q4.shape == (0, 0)
    assert block_split(C, 2) == (
        from_rows("00", "10"),
        from_rows("01", "00"),
        from_rows("01", "00"),
        from_rows("00", "11"),
    )
    with pytest.raises(ValueError):
        block_split(C, 5)


def test_canonicalize_examples():
    canon = direct_sum(identity(2), zero(2))
    s = canonicalize_idempotent(canon)
    assert conjugate(s, canon) == canon
    assert canonicalize_idempotent(from_rows("00", "01")) == from_rows("01", "10")
    with pytest.raises(ValueError):
        canonicalize_idempotent(C)


def test_canonicalize_random_idempotents(rng):
    for _ in range(500):
        n = rng.randint(1, 8)
        p = random_idempotent(rng, n)
        r = rank(p)
        got = conjugate(canonicalize_idempotent(p), p)
        assert got == direct_sum(identity(r), zero(n - r))


def test_text_format_round_trip():
    text = format_matrix(C)
    assert text == "4\n0001\n1000\n0100\n0011\n"
    assert parse_matrix(text) == C
    for bad in ["", "2\n01\n", "2\n012\n10\n", "x\n"]:
        with pytest.raises(ValueError):
            parse_matrix(bad)


# -- properties -------------------------------------------------------------

def _naive_mul(a, b):
    return (to_np(a) @ to_np(b)) % 2


@settings(max_examples=1000, deadline=None)
@given(matrix_pairs(max_n=8, count=3))
def test_ring_laws(abc):
    a, b, c = abc
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert mul(add(a, b), c) == add(mul(a, c), mul(b, c))
    n = a.n
    assert mul(identity(n), a) == a == mul(a, identity(n))
    assert np.array_equal(to_np(mul(a, b)), _naive_mul(a, b))


@settings(max_examples=1000, deadline=None)
@given(matrix_pairs(max_n=8))
def test_trace_commutes(ab):
    a, b = ab
    assert trace(mul(a, b)) == trace(mul(b, a))
    assert trace(add(mul(a, b), mul(b, a))) == 0


@given(matrices(max_n=10))
def test_rank_matches_independent_elimination(a):
    assert rank(a) == np_rank(to_np(a))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_trace_of_idempotent_is_rank_parity_exhaustive(n):
    seen = 0
    for p in all_matrices(n):
        if is_idempotent(p):
            seen += 1
            assert trace(p) == rank(p) % 2
    assert seen == {1: 2, 2: 8, 3: 58}[n]


def test_trace_of_idempotent_sampled_n4(rng):
    for _ in range(300):
        p = random_idempotent(rng, 4)
        assert trace(p) == rank(p) % 2


def test_nilpotent_trace_zero(rng):
    for _ in range(500):
        n = rng.randint(1, 8)
        q = random_nilpotent(rng, n)
        assert is_nilpotent_index(q, n)
        assert trace(q) == 0


def test_conjugation_invariants(rng):
    for _ in range(300):
        n = rng.randint(1, 6)
        a = random_matrix(rng, n)
        s = random_invertible(rng, n)
        b = conjugate(s, a)
        assert rank(b) == rank(a)
        assert trace(b) == trace(a)
        assert is_idempotent(b) == is_idempotent(a)
        for k in range(1, n + 1):
            assert is_nilpotent_index(b, k) == is_nilpotent_index(a, k)


@given(matrices(max_n=8))
def test_inverse_or_singular(a):
    if rank(a) == a.n:
        b = inverse(a)
        assert mul(a, b) == identity(a.n) == mul(b, a)
    else:
        with pytest.raises(SingularMatrixError):
            inverse(a)


@given(matrices(max_n=8), matrices(min_n=0, max_n=8))
def test_block_split_reassembles(a, alpha_src):
    alpha = alpha_src.nrows % (a.n + 1)
    assert block_join(*block_split(a, alpha)) == a


@given(matrices(max_n=6))
def test_eval_poly_is_multiplicative(a):
    for f, g in [(0b111, 0b11), (0b10011, 0b101), (0b1, 0b1101)]:
        fg = Gf2Poly(f) * Gf2Poly(g)
        assert eval_poly(fg, a) == mul(eval_poly(Gf2Poly(f), a), eval_poly(Gf2Poly(g), a))


def test_large_dimension_supported():
    s = shift(70)
    assert rank(s) == 69
    assert is_nilpotent_index(s, 70) and not is_nilpotent_index(s, 69)


def test_rows_reject_out_of_range_bits():
    with pytest.raises(ValueError):
        Gf2Matrix([0b100, 0], 2)
