"""Idempotent enumeration, nil-clean decomposition search and the proof audits.

Decompositions A = P + Q over GF(2) with P^2 = P and Q^k = 0 are searched by
scanning idempotents P and testing (A + P)^k = 0. The stratified enumerator
generates each idempotent exactly once from an (image, complement) pair of
subspaces, so exhausting it is a complete proof of non-existence.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterator, Literal

from nilclean import __version__
from nilclean.gf2 import (
    Gf2Matrix,
    add,
    block_split,
    direct_sum,
    format_matrix,
    identity,
    is_idempotent,
    is_nilpotent_index,
    mat_pow,
    matrix_c,
    mul,
    parse_matrix,
    rank,
    trace,
    zero,
)
from nilclean.ncpoly import derive_eq1, evaluate
from nilclean.similarity import SimilarityClass, enumerate_similarity_classes

__all__ = [
    "Decomposition",
    "InvalidDecomposition",
    "SearchConfig",
    "SearchReport",
    "verify_decomposition",
    "iter_idempotents",
    "iter_subspaces",
    "gaussian_binomial",
    "idempotent_count_formula",
    "decompose",
    "theorem_check",
    "block_identity_check",
    "ParityAudit",
    "parity_audit",
    "SurveyRow",
    "survey",
    "report_to_json",
    "report_from_json",
    "verify_certificate",
]

Strategy = Literal["brute", "stratified", "sat"]
Status = Literal["found", "exhausted-none", "exported", "unknown"]
BRUTE_MAX_N = 4


class InvalidDecomposition(ValueError):
    pass


def verify_decomposition(p: Gf2Matrix, q: Gf2Matrix, k: int, target: Gf2Matrix) -> bool:
    """True iff p + q = target, p^2 = p and q^k = 0."""
    if k < 1 or not (p.shape == q.shape == target.shape) or not p.is_square:
        return False
    return add(p, q) == target and is_idempotent(p) and is_nilpotent_index(q, k)


@dataclass(frozen=True)
class Decomposition:
    p: Gf2Matrix
    q: Gf2Matrix
    k: int
    target: Gf2Matrix

    def __post_init__(self):
        if not verify_decomposition(self.p, self.q, self.k, self.target):
            raise InvalidDecomposition(f"not a valid index-{self.k} decomposition of {self.target!r}")

    @classmethod
    def from_idempotent(cls, target: Gf2Matrix, p: Gf2Matrix, k: int) -> Decomposition:
        return cls(p, add(target, p), k, target)


@dataclass
class SearchConfig:
    workers: int = 1
    sat_budget: int | None = 2_000_000
    cnf_out: str | Path | None = None


@dataclass
class SearchReport:
    target: Gf2Matrix
    k: int
    status: Status
    strategy: Strategy
    space_size: int
    witness: Decomposition | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status == "found" and self.witness is None:
            raise ValueError("status 'found' requires a witness")
        if self.witness is not None and self.witness.target != self.target:
            raise ValueError("witness does not decompose the report target")

    @property
    def n(self) -> int:
        return self.target.n


# -- idempotent enumeration -------------------------------------------------

def iter_subspaces(n: int, r: int, pivots: tuple[int, ...] | None = None) -> Iterator[tuple[tuple[int, ...], list[int]]]:
    """r-dimensional subspaces of GF(2)^n as (pivot columns, RREF basis rows).

    Vectors are ints with bit j = coordinate j. Pivot sets come in
    ``combinations`` order; free entries of each row are the non-pivot
    coordinates after its pivot.
    """
    pivot_sets = [pivots] if pivots is not None else combinations(range(n), r)
    for piv in pivot_sets:
        pset = set(piv)
        free = [[m for m in range(c + 1, n) if m not in pset] for c in piv]
        total = sum(len(f) for f in free)
        for pattern in range(1 << total):
            rows = []
            shift_ = 0
            for c, fr in zip(piv, free):
                v = 1 << c
                for t, m in enumerate(fr):
                    if (pattern >> (shift_ + t)) & 1:
                        v |= 1 << m
                shift_ += len(fr)
                rows.append(v)
            yield piv, rows


def _projections(n: int, piv: tuple[int, ...], basis: list[int]) -> Iterator[Gf2Matrix]:
    """Every idempotent with image span(basis); the kernel ranges over all complements.

    Complements are spanned by w_m = e_m + phi(e_m) for the non-pivot m, with
    phi an arbitrary map into the image, so P e_m = phi(e_m) and
    P e_c = u_c - sum_m u_c[m] P e_m for the pivot c of basis row u_c.
    """
    r = len(piv)
    nonpiv = [m for m in range(n) if m not in set(piv)]
    s = len(nonpiv)
    for pattern in range(1 << (r * s)):
        cols = [0] * n
        for t, m in enumerate(nonpiv):
            v = 0
            for i in range(r):
                if (pattern >> (t * r + i)) & 1:
                    v ^= basis[i]
            cols[m] = v
        for i, c in enumerate(piv):
            v = basis[i]
            u = basis[i] & ~(1 << c)
            while u:
                low = u & -u
                v ^= cols[low.bit_length() - 1]
                u ^= low
            cols[c] = v
        rows = [0] * n
        for j, col in enumerate(cols):
            while col:
                low = col & -col
                rows[low.bit_length() - 1] |= 1 << j
                col ^= low
        yield Gf2Matrix(rows, n)


def _stratified(n: int, r: int | None = None, pivots: tuple[int, ...] | None = None) -> Iterator[Gf2Matrix]:
    ranks = range(n + 1) if r is None else [r]
    for rr in ranks:
        for piv, basis in iter_subspaces(n, rr, pivots):
            yield from _projections(n, piv, basis)


def _brute(n: int) -> Iterator[Gf2Matrix]:
    if n > BRUTE_MAX_N:
        raise ValueError(f"brute enumeration is limited to n <= {BRUTE_MAX_N}")
    mask = (1 << n) - 1
    for x in range(1 << (n * n)):
        rows = [(x >> (n * i)) & mask for i in range(n)]
        a = Gf2Matrix(rows, n)
        if is_idempotent(a):
            yield a


def iter_idempotents(n: int, strategy: Strategy = "stratified") -> Iterator[Gf2Matrix]:
    if n < 1:
        raise ValueError("n must be >= 1")
    if strategy == "brute":
        return _brute(n)
    if strategy == "stratified":
        return _stratified(n)
    raise ValueError(f"unknown enumeration strategy {strategy!r}")


def gaussian_binomial(n: int, r: int, q: int = 2) -> int:
    if r < 0 or r > n:
        return 0
    num = den = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def idempotent_count_formula(n: int) -> int:
    return sum(gaussian_binomial(n, r) * 2 ** (r * (n - r)) for r in range(n + 1))


# -- decomposition search ---------------------------------------------------

def _nilpotent_rank_bound(n: int, k: int) -> int:
    # q^k = 0 forces rank q <= n - ceil(n/k)
    return n - (-(-n // k))


def _scan(target: Gf2Matrix, k: int, candidates) -> tuple[int, Gf2Matrix | None]:
    n = target.n
    bound = _nilpotent_rank_bound(n, k)
    count = 0
    best: Gf2Matrix | None = None
    best_key = None
    for p in candidates:
        count += 1
        q = add(target, p)
        if rank(q) > bound:
            continue
        if mat_pow(q, k).is_zero():
            key = p.sort_key()
            if best is None or key < best_key:
                best, best_key = p, key
    return count, best


def _scan_task(args):
    target_rows, n, k, r, piv = args
    target = Gf2Matrix(target_rows, n)
    return _scan(target, k, _stratified(n, r, piv))


def _stratified_search(target: Gf2Matrix, k: int, workers: int) -> tuple[int, Gf2Matrix | None]:
    n = target.n
    tasks = [(target.rows, n, k, r, piv) for r in range(n + 1) for piv in combinations(range(n), r)]
    if workers <= 1 or len(tasks) == 1:
        results = map(_scan_task, tasks)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_task, tasks))
    total = 0
    best = None
    for count, cand in results:
        total += count
        if cand is not None and (best is None or cand.sort_key() < best.sort_key()):
            best = cand
    return total, best


def decompose(
    a: Gf2Matrix,
    k: int,
    strategy: Strategy = "stratified",
    config: SearchConfig | None = None,
) -> SearchReport:
    """Search for an idempotent p with (a + p)^k = 0.

    The witness, when found, is the lexicographically smallest p (rows
    concatenated as a bit string), so output does not depend on enumeration
    order or worker count.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    config = config or SearchConfig()
    n = a.n
    if strategy == "brute":
        count, best = _scan(a, k, _brute(n))
    elif strategy == "stratified":
        count, best = _stratified_search(a, k, config.workers)
    elif strategy == "sat":
        return _sat_decompose(a, k, config)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if best is None:
        return SearchReport(a, k, "exhausted-none", strategy, count)
    return SearchReport(a, k, "found", strategy, count, Decomposition.from_idempotent(a, best, k))


def _sat_decompose(a: Gf2Matrix, k: int, config: SearchConfig) -> SearchReport:
    from nilclean import sat

    inst = sat.encode(a, k)
    extra = {"num_vars": inst.num_vars, "num_clauses": len(inst.clauses)}
    if config.cnf_out is not None:
        Path(config.cnf_out).write_text(sat.to_dimacs(inst))
        extra["cnf"] = str(config.cnf_out)
    if config.sat_budget == 0:
        return SearchReport(a, k, "exported", "sat", 0, extra=extra)
    res = sat.dpll_solve(inst, "first-solution", budget=config.sat_budget)
    extra["decisions"] = res.decisions
    if res.status == "sat":
        d = sat.decode_and_verify(inst, res.assignment)
        return SearchReport(a, k, "found", "sat", res.decisions, d, extra)
    if res.status == "unsat":
        return SearchReport(a, k, "exhausted-none", "sat", res.decisions, extra=extra)
    return SearchReport(a, k, "exported", "sat", res.decisions, extra=extra)


def theorem_check(m: int, config: SearchConfig | None = None) -> SearchReport:
    """Index-3 search on the direct sum of m copies of C.

    m = 1 is settled by exhausting all idempotents of M_4(GF(2)). For m >= 3
    the CNF instance is only exported; non-existence is never claimed
    without an external UNSAT result.
    """
    if m < 1 or m % 2 == 0:
        raise ValueError(f"m={m}: the statement concerns an odd number of copies of C")
    config = config or SearchConfig()
    target = direct_sum([matrix_c()] * m)
    if m == 1:
        return decompose(target, 3, "stratified", config)
    from nilclean import sat

    inst = sat.encode(target, 3)
    extra = {"num_vars": inst.num_vars, "num_clauses": len(inst.clauses), "copies": m}
    if config.cnf_out is not None:
        Path(config.cnf_out).write_text(sat.to_dimacs(inst))
        extra["cnf"] = str(config.cnf_out)
    report = SearchReport(target, 3, "exported", "sat", 0, extra=extra)
    report.extra["instance"] = inst
    return report


# -- audits from the proof --------------------------------------------------

def block_identity_check(r: int, q: Gf2Matrix) -> tuple[Gf2Matrix, Gf2Matrix, bool]:
    """Compare the bottom-right block of the six-word identity with Q3 Q2 Q4 + Q4 Q3 Q2.

    P is fixed to diag(I_r, 0). The two sides agree for every q; the
    identity's right-hand side I only enters when (P+Q)^4 + (P+Q)^3 = I.
    """
    n = q.n
    if not 0 <= r <= n:
        raise ValueError(f"r={r} out of range for n={n}")
    alpha = n - r
    p = direct_sum(identity(r), zero(alpha))
    e = evaluate(derive_eq1(), p, q)
    lhs = block_split(e, alpha)[3]
    _, q2, q3, q4 = block_split(q, alpha)
    q3q2 = mul(q3, q2)
    rhs = add(mul(q3q2, q4), mul(q4, q3q2))
    return lhs, rhs, lhs == rhs


@dataclass(frozen=True)
class ParityAudit:
    alpha: int
    eq1_holds: bool
    trace_sum: int
    trace_p: int
    rank_p_parity: int
    trace_q: int

    @property
    def consistent(self) -> bool:
        """The consequences the trace argument relies on."""
        ok = self.trace_p == self.rank_p_parity and self.trace_q == 0
        if self.eq1_holds:
            ok = ok and self.alpha % 2 == 0 and self.trace_sum == 0
        return ok


def parity_audit(p: Gf2Matrix, q: Gf2Matrix) -> ParityAudit:
    if not is_idempotent(p) or p.shape != q.shape or not is_nilpotent_index(q, 3):
        raise ValueError("parity_audit needs p idempotent and q^3 = 0 of the same size")
    n = p.n
    rp = rank(p)
    eq1 = evaluate(derive_eq1(), p, q) == identity(n)
    return ParityAudit(
        alpha=n - rp,
        eq1_holds=eq1,
        trace_sum=trace(add(p, q)),
        trace_p=trace(p),
        rank_p_parity=rp % 2,
        trace_q=trace(q),
    )


# -- survey -----------------------------------------------------------------

@dataclass(frozen=True)
class SurveyRow:
    cls: SimilarityClass
    report: SearchReport

    @property
    def decomposable(self) -> bool | None:
        if self.report.status == "found":
            return True
        if self.report.status == "exhausted-none":
            return False
        return None


def survey(n: int, k: int, strategy: Strategy = "stratified", config: SearchConfig | None = None) -> list[SurveyRow]:
    """Run ``decompose`` on every similarity-class representative of M_n(GF(2)).

    Decomposability is a similarity invariant, so the rows classify the whole ring.
    """
    return [SurveyRow(c, decompose(c.representative, k, strategy, config)) for c in enumerate_similarity_classes(n)]


# -- certificates -----------------------------------------------------------

def report_to_json(report: SearchReport) -> str:
    doc = {
        "n": report.n,
        "k": report.k,
        "target": format_matrix(report.target),
        "status": report.status,
        "strategy": report.strategy,
        "space_size": report.space_size,
    }
    if report.witness is not None:
        doc["witness_p"] = format_matrix(report.witness.p)
        doc["witness_q"] = format_matrix(report.witness.q)
    for key, val in report.extra.items():
        if isinstance(val, (int, str, float, bool)) or val is None:
            doc[key] = val
    doc["tool_version"] = f"nilclean {__version__}"
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def report_from_json(text: str) -> SearchReport:
    doc = json.loads(text)
    target = parse_matrix(doc["target"])
    if target.n != doc["n"]:
        raise ValueError("certificate n does not match its target")
    witness = None
    if "witness_p" in doc:
        witness = Decomposition(parse_matrix(doc["witness_p"]), parse_matrix(doc["witness_q"]), doc["k"], target)
    return SearchReport(target, doc["k"], doc["status"], doc["strategy"], doc["space_size"], witness)


def verify_certificate(text: str) -> SearchReport:
    """Re-check a JSON certificate. A found witness is re-verified on load;
    an exhausted-none claim is re-derived by running the search again."""
    report = report_from_json(text)
    if report.status == "exhausted-none":
        again = decompose(report.target, report.k, "stratified")
        if again.status != "exhausted-none":
            raise InvalidDecomposition("certificate claims no decomposition but one exists")
    return report
