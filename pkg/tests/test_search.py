import json
import random

import pytest

from conftest import all_matrices, random_idempotent, random_invertible, random_matrix, random_nilpotent_index
from nilclean.gf2 import (
    add,
    block_split,
    conjugate,
    direct_sum,
    identity,
    mat_pow,
    matrix_c,
    mul,
    rank,
    trace,
    zero,
)
from nilclean.search import (
    Decomposition,
    InvalidDecomposition,
    SearchConfig,
    decompose,
    block_identity_check,
    gaussian_binomial,
    idempotent_count_formula,
    iter_idempotents,
    iter_subspaces,
    parity_audit,
    report_from_json,
    report_to_json,
    survey,
    theorem_check,
    verify_certificate,
    verify_decomposition,
)

C = matrix_c()


def brute_valid_idempotents(a, k):
    return [p for p in iter_idempotents(a.n, "brute") if mat_pow(add(a, p), k).is_zero()]


@pytest.mark.parametrize("n,count", [(1, 2), (2, 8), (3, 58), (4, 802)])
def test_idempotent_counts(n, count):
    assert sum(1 for _ in iter_idempotents(n, "brute")) == count
    strat = list(iter_idempotents(n, "stratified"))
    assert len(strat) == count == len(set(strat))
    assert idempotent_count_formula(n) == count


@pytest.mark.parametrize("n", [1, 2, 3])
def test_strategies_yield_same_set(n):
    assert set(iter_idempotents(n, "brute")) == set(iter_idempotents(n, "stratified"))


def test_count_formula_edge_and_larger():
    assert idempotent_count_formula(0) == 1
    assert idempotent_count_formula(5) == sum(1 for _ in iter_idempotents(5))
    assert gaussian_binomial(4, 2) == 35
    assert sum(1 for _ in iter_subspaces(4, 2)) == 35


def test_brute_limit():
    with pytest.raises(ValueError):
        list(iter_idempotents(5, "brute"))


def test_stratified_elements_are_idempotent_with_expected_rank():
    for p in iter_idempotents(4):
        assert mul(p, p) == p
        assert trace(p) == rank(p) % 2


def test_theorem_at_m1():
    rep = decompose(C, 3, "stratified")
    assert rep.status == "exhausted-none"
    assert rep.space_size == 802
    assert rep.witness is None


def test_index_four_witness_matches_brute_oracle():
    rep = decompose(C, 4, "stratified")
    assert rep.status == "found"
    oracle = brute_valid_idempotents(C, 4)
    assert oracle
    best = min(oracle, key=lambda p: p.bitstring())
    assert rep.witness.p == best
    # frozen from the brute-force oracle above
    assert rep.witness.p.row_strings() == ["0000", "0000", "0000", "0011"]
    assert rep.witness.q == add(C, best)


@pytest.mark.parametrize("strategy", ["brute", "stratified", "sat"])
@pytest.mark.parametrize("n", [1, 3])
def test_trivial_decompositions(strategy, n):
    rep = decompose(zero(n), 1, strategy)
    assert rep.status == "found" and rep.witness.p == zero(n) and rep.witness.q == zero(n)
    rep = decompose(identity(n), 1, strategy)
    assert rep.status == "found" and rep.witness.p == identity(n) and rep.witness.q == zero(n)


def test_strategies_agree_on_small_targets():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 3)
        a = random_matrix(rng, n)
        k = rng.randint(1, 3)
        reps = [decompose(a, k, s) for s in ("brute", "stratified", "sat")]
        assert len({r.status for r in reps}) == 1
        if reps[0].status == "found":
            assert len({r.witness.p for r in reps}) == 1
        assert (reps[0].status == "found") == bool(brute_valid_idempotents(a, k))


def test_verify_decomposition_examples():
    assert verify_decomposition(identity(4), zero(4), 1, identity(4))
    assert not verify_decomposition(zero(4), C, 3, C)
    with pytest.raises(InvalidDecomposition):
        Decomposition(zero(4), C, 3, C)


def test_witness_is_independent_of_worker_count():
    a = direct_sum(C, identity(1))
    one = decompose(a, 4, "stratified", SearchConfig(workers=1))
    two = decompose(a, 4, "stratified", SearchConfig(workers=2))
    assert one.status == two.status == "found"
    assert one.witness.p == two.witness.p and one.space_size == two.space_size


def test_similarity_invariance_of_status():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(2, 4)
        a = random_matrix(rng, n)
        s = random_invertible(rng, n)
        for k in (2, 3):
            assert decompose(conjugate(s, a), k).status == decompose(a, k).status


def test_theorem_check_variants(tmp_path):
    assert theorem_check(1).status == "exhausted-none"
    with pytest.raises(ValueError):
        theorem_check(2)
    out = tmp_path / "m3.cnf"
    rep = theorem_check(3, SearchConfig(cnf_out=out))
    assert rep.status == "exported"
    assert out.read_text().splitlines()[0].startswith("c nilclean n 12 k 3")


def test_block_identity_examples():
    for n in (2, 4, 5):
        for r in range(n + 1):
            alpha = n - r
            lhs, rhs, ok = block_identity_check(r, zero(n))
            assert ok and lhs == zero(alpha) and rhs == zero(alpha)
            lhs, rhs, ok = block_identity_check(r, identity(n))
            assert ok and lhs == zero(alpha)


def test_block_identity_random():
    rng = random.Random(13)
    for n in (2, 3, 4, 6, 8):
        for _ in range(200):
            q = random_matrix(rng, n)
            for r in range(n + 1):
                assert block_identity_check(r, q)[2]


def test_block_identity_rhs_by_hand():
    q = C
    lhs, rhs, ok = block_identity_check(2, q)
    _, q2, q3, q4 = block_split(q, 2)
    assert rhs == add(mul(mul(q3, q2), q4), mul(q4, mul(q3, q2)))
    assert ok


def test_parity_audit_examples():
    rec = parity_audit(zero(4), zero(4))
    assert (rec.eq1_holds, rec.alpha, rec.trace_sum) == (False, 4, 0)
    rec = parity_audit(identity(4), zero(4))
    assert (rec.eq1_holds, rec.alpha) == (False, 0)
    with pytest.raises(ValueError):
        parity_audit(C, zero(4))
    with pytest.raises(ValueError):
        parity_audit(identity(4), C)


def test_parity_audit_set_for_c_is_empty():
    hits = [p for p in iter_idempotents(4) if mat_pow(add(C, p), 3).is_zero()]
    assert hits == []


def test_parity_audit_random_pairs_consistent():
    rng = random.Random(17)
    for _ in range(300):
        n = rng.randint(1, 8)
        p = random_idempotent(rng, n)
        q = random_nilpotent_index(rng, n, 3)
        rec = parity_audit(p, q)
        assert rec.consistent
        assert rec.trace_q == 0 and rec.trace_p == rec.rank_p_parity


def test_survey_small():
    rows = survey(1, 1)
    assert [r.decomposable for r in rows] == [True, True]
    assert [r.report.witness.p.rows for r in rows] == [(0,), (1,)]


def test_survey_n4():
    rows4 = survey(4, 4)
    assert len(rows4) == 34 and all(r.decomposable for r in rows4)
    rows3 = {r.cls.label(): r for r in survey(4, 3)}
    assert rows3["10011"].decomposable is False
    assert rows3["10011"].report.space_size == 802


def test_certificate_round_trip():
    rep = decompose(C, 4)
    text = report_to_json(rep)
    doc = json.loads(text)
    assert doc["status"] == "found" and doc["n"] == 4 and doc["k"] == 4
    assert doc["target"] == "4\n0001\n1000\n0100\n0011\n"
    assert {"witness_p", "witness_q", "tool_version", "space_size", "strategy"} <= set(doc)
    back = report_from_json(text)
    assert back.witness == rep.witness
    assert verify_certificate(text).status == "found"

    none = report_to_json(decompose(C, 3))
    assert "witness_p" not in json.loads(none)
    assert verify_certificate(none).status == "exhausted-none"


def test_tampered_certificates_rejected():
    doc = json.loads(report_to_json(decompose(C, 4)))
    doc["witness_p"] = "4\n0000\n0000\n0000\n0001\n"
    with pytest.raises(InvalidDecomposition):
        verify_certificate(json.dumps(doc))
    doc = json.loads(report_to_json(decompose(C, 4)))
    doc["status"] = "exhausted-none"
    del doc["witness_p"], doc["witness_q"]
    with pytest.raises(InvalidDecomposition):
        verify_certificate(json.dumps(doc))


def test_rank_filter_never_drops_witnesses():
    # exhaustive over n = 2 targets: filtered search finds a witness iff brute force does
    for a in all_matrices(2):
        for k in (1, 2, 3):
            assert (decompose(a, k).status == "found") == bool(brute_valid_idempotents(a, k))
