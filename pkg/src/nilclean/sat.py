"""CNF encoding of "A = P + Q, P^2 = P, Q^k = 0" plus DIMACS I/O and a small DPLL solver.

Primary variables are the entries of P, numbered row-major from 1. Entries of
Q are the literals a_ij XOR p_ij (a constant XOR only flips polarity). Products
become Tseitin AND gates cached by literal pair, and each parity constraint is
split into 3-literal XOR gadgets with fresh chain variables.

Every auxiliary variable is functionally determined by the primaries, so
models of the CNF are in bijection with idempotents p such that (a+p)^k = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Literal

from nilclean.gf2 import Gf2Matrix, add, from_rows
from nilclean.search import Decomposition, InvalidDecomposition

__all__ = [
    "CnfInstance",
    "Assignment",
    "SolveResult",
    "EncoderBugError",
    "UnsatisfiedAssignmentError",
    "encode",
    "to_dimacs",
    "parse_dimacs",
    "parse_solver_output",
    "dpll_solve",
    "iter_models",
    "projected_model_count",
    "decode_and_verify",
    "satisfies",
]

FALSE = 0  # product that vanishes identically (x AND not x)
TRUE = None  # empty product


class EncoderBugError(AssertionError):
    """A satisfying assignment decoded to something that is not a decomposition."""


class UnsatisfiedAssignmentError(ValueError):
    pass


@dataclass
class CnfInstance:
    num_vars: int = 0
    clauses: list[list[int]] = field(default_factory=list)
    varmap: dict[int, tuple[int, int]] = field(default_factory=dict)
    n: int | None = None
    k: int | None = None
    target: Gf2Matrix | None = None

    def primary_var(self, i: int, j: int) -> int:
        """Variable of entry (i, j), 0-based."""
        return i * self.n + j + 1


@dataclass(frozen=True)
class Assignment:
    values: tuple[bool, ...]

    def __post_init__(self):
        if any(not isinstance(v, bool) for v in self.values):
            raise TypeError("assignment values must be bools")

    def __len__(self) -> int:
        return len(self.values)

    def value(self, lit: int) -> bool:
        v = self.values[abs(lit) - 1]
        return v if lit > 0 else not v


class _Builder:
    def __init__(self, n: int):
        self.num_vars = n * n
        self.clauses: list[list[int]] = []
        self.and_cache: dict[tuple[int, int], int] = {}

    def fresh(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def and_(self, x, y):
        if x is FALSE or y is FALSE:
            return FALSE
        if x is TRUE:
            return y
        if y is TRUE:
            return x
        if x == y:
            return x
        if x == -y:
            return FALSE
        key = (min(x, y), max(x, y))
        g = self.and_cache.get(key)
        if g is None:
            g = self.fresh()
            self.clauses += [[-g, x], [-g, y], [g, -x, -y]]
            self.and_cache[key] = g
        return g

    def xor_equals(self, lits, parity: int) -> None:
        """Constrain XOR of ``lits`` (ints, or TRUE/FALSE constants) to ``parity``."""
        odd: dict[int, None] = {}
        for lit in lits:
            if lit is FALSE:
                continue
            if lit is TRUE:
                parity ^= 1
                continue
            if lit < 0:
                parity ^= 1
            v = abs(lit)
            if v in odd:
                del odd[v]
            else:
                odd[v] = None
        vars_ = list(odd)
        while len(vars_) > 3:
            c = self.fresh()
            self._small_xor([vars_[0], vars_[1], c], 0)
            vars_ = [c] + vars_[2:]
        self._small_xor(vars_, parity)

    def _small_xor(self, vars_: list[int], parity: int) -> None:
        # one clause per forbidden assignment
        for bits in product((0, 1), repeat=len(vars_)):
            if sum(bits) % 2 != parity:
                self.clauses.append([-v if b else v for v, b in zip(vars_, bits)])


def encode(a: Gf2Matrix, k: int) -> CnfInstance:
    if k < 1:
        raise ValueError("k must be >= 1")
    n = a.n
    b = _Builder(n)

    def p(i, j):
        return i * n + j + 1

    def q(i, j):
        return -p(i, j) if a.entry(i, j) else p(i, j)

    # idempotence: XOR_l p_il p_lj + p_ij = 0
    for i in range(n):
        for j in range(n):
            terms = [b.and_(p(i, l), p(l, j)) for l in range(n)]
            b.xor_equals(terms + [p(i, j)], 0)

    # nilpotence: every entry of Q^k vanishes; prefix products of a path are shared
    prefixes = {(i,): TRUE for i in range(n)}
    for _ in range(k - 1):
        nxt = {}
        for path, val in prefixes.items():
            for m in range(n):
                nxt[path + (m,)] = b.and_(val, q(path[-1], m))
        prefixes = nxt
    by_entry: dict[tuple[int, int], list] = {}
    for path, val in prefixes.items():
        for j in range(n):
            by_entry.setdefault((path[0], j), []).append(b.and_(val, q(path[-1], j)))
    for i in range(n):
        for j in range(n):
            b.xor_equals(by_entry[(i, j)], 0)

    varmap = {p(i, j): (i + 1, j + 1) for i in range(n) for j in range(n)}
    return CnfInstance(b.num_vars, b.clauses, varmap, n, k, a)


# -- DIMACS -----------------------------------------------------------------

def to_dimacs(c: CnfInstance) -> str:
    lines = []
    if c.n is not None:
        lines.append(f"c nilclean n {c.n} k {c.k}")
    if c.target is not None:
        for row in c.target.row_strings():
            lines.append(f"c target {row}")
    for var, (i, j) in sorted(c.varmap.items()):
        lines.append(f"c varmap p {i} {j} {var}")
    lines.append(f"p cnf {c.num_vars} {len(c.clauses)}")
    for cl in c.clauses:
        lines.append(" ".join(map(str, cl)) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfInstance:
    inst = CnfInstance()
    target_rows = []
    header = None
    pending: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("c"):
            parts = line.split()
            if parts[1:3] == ["varmap", "p"] and len(parts) == 6:
                inst.varmap[int(parts[5])] = (int(parts[3]), int(parts[4]))
            elif parts[1:2] == ["target"] and len(parts) == 3:
                target_rows.append(parts[2])
            elif parts[1:3] == ["nilclean", "n"] and len(parts) == 6:
                inst.n, inst.k = int(parts[3]), int(parts[5])
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad DIMACS header {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise ValueError("clause before the DIMACS header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                inst.clauses.append(pending)
                pending = []
            else:
                pending.append(lit)
    if header is None:
        raise ValueError("missing DIMACS header")
    if pending:
        raise ValueError("last clause is not terminated by 0")
    inst.num_vars = header[0]
    if len(inst.clauses) != header[1]:
        raise ValueError(f"header promises {header[1]} clauses, found {len(inst.clauses)}")
    if target_rows:
        inst.target = from_rows(*target_rows)
    return inst


def parse_solver_output(text: str) -> tuple[str, Assignment | None]:
    """Read "s ..." and "v ..." lines from a standard SAT solver.

    Returns ("sat" | "unsat" | "unknown", assignment or None). Variables not
    mentioned on v lines default to False.
    """
    status = "unknown"
    lits: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("s "):
            word = line[2:].strip().upper()
            status = {"SATISFIABLE": "sat", "UNSATISFIABLE": "unsat"}.get(word, "unknown")
        elif line.startswith("v "):
            lits.extend(int(t) for t in line[2:].split() if t != "0")
    if status != "sat":
        return status, None
    width = max((abs(x) for x in lits), default=0)
    vals = [False] * width
    for x in lits:
        vals[abs(x) - 1] = x > 0
    return status, Assignment(tuple(vals))


# -- DPLL -------------------------------------------------------------------

@dataclass
class SolveResult:
    status: Literal["sat", "unsat", "unknown"]
    assignment: Assignment | None = None
    count: int | None = None
    decisions: int = 0


class _BudgetExceeded(Exception):
    pass


def _canonical(clauses: list[list[int]]) -> list[tuple[int, ...]]:
    out = set()
    for cl in clauses:
        s = set(cl)
        if any(-x in s for x in s):
            continue  # tautology
        out.add(tuple(sorted(s, key=lambda x: (abs(x), x))))
    return sorted(out, key=lambda c: (len(c), [(abs(x), x) for x in c]))


def _dpll(num_vars: int, clauses: list[list[int]], budget: int | None) -> Iterator[tuple[list[int], int]]:
    """Yield every model (as a value list indexed by var, 1 = true, -1 = false).

    Chronological backtracking with two watched literals. Branches on the
    lowest-index unassigned variable, false first, so models come out in
    lexicographic order of the variable values.
    """
    cls = _canonical(clauses)
    if any(len(c) == 0 for c in cls):
        return
    val = [0] * (num_vars + 1)
    trail: list[int] = []
    watches: dict[int, list[int]] = {}
    units: list[int] = []
    clist = [list(c) for c in cls]
    for idx, c in enumerate(clist):
        if len(c) == 1:
            units.append(c[0])
        else:
            watches.setdefault(c[0], []).append(idx)
            watches.setdefault(c[1], []).append(idx)

    def lit_val(x: int) -> int:
        v = val[abs(x)]
        return v if x > 0 else -v

    def assign(x: int) -> None:
        val[abs(x)] = 1 if x > 0 else -1
        trail.append(x)

    def propagate(start: int) -> bool:
        i = start
        while i < len(trail):
            false_lit = -trail[i]
            i += 1
            wl = watches.get(false_lit)
            if not wl:
                continue
            keep = []
            j = 0
            conflict = False
            while j < len(wl):
                idx = wl[j]
                j += 1
                c = clist[idx]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if lit_val(c[0]) == 1:
                    keep.append(idx)
                    continue
                for t in range(2, len(c)):
                    if lit_val(c[t]) != -1:
                        c[1], c[t] = c[t], c[1]
                        watches.setdefault(c[1], []).append(idx)
                        break
                else:
                    keep.append(idx)
                    v0 = lit_val(c[0])
                    if v0 == -1:
                        conflict = True
                        keep.extend(wl[j:])
                        break
                    if v0 == 0:
                        assign(c[0])
            watches[false_lit] = keep
            if conflict:
                return False
        return True

    for u in units:
        v = lit_val(u)
        if v == -1:
            return
        if v == 0:
            assign(u)
    if not propagate(0):
        return

    decisions = 0
    stack: list[tuple[int, int, bool]] = []  # (trail length before decision, var, true branch tried)
    next_var = 1

    def backtrack() -> bool:
        while stack:
            pos, var, tried = stack.pop()
            while len(trail) > pos:
                val[abs(trail.pop())] = 0
            if not tried:
                stack.append((pos, var, True))
                assign(var)
                if propagate(pos):
                    return True
        return False

    while True:
        while next_var <= num_vars and val[next_var] != 0:
            next_var += 1
        if next_var > num_vars:
            yield val, decisions
            if not backtrack():
                return
            next_var = 1
            continue
        decisions += 1
        if budget is not None and decisions > budget:
            raise _BudgetExceeded(decisions)
        pos = len(trail)
        stack.append((pos, next_var, False))
        assign(-next_var)
        if not propagate(pos):
            if not backtrack():
                return
            next_var = 1


def iter_models(c: CnfInstance, budget: int | None = None) -> Iterator[Assignment]:
    for vals, _ in _dpll(c.num_vars, c.clauses, budget):
        yield Assignment(tuple(v == 1 for v in vals[1:]))


def dpll_solve(
    c: CnfInstance,
    mode: Literal["first-solution", "count-all", "prove-unsat"] = "first-solution",
    budget: int | None = None,
) -> SolveResult:
    """Complete DPLL search. ``budget`` caps decisions; exceeding it yields status unknown."""
    if mode not in ("first-solution", "count-all", "prove-unsat"):
        raise ValueError(f"unknown mode {mode!r}")
    gen = _dpll(c.num_vars, c.clauses, budget)
    count = 0
    first = None
    decisions = 0
    try:
        for vals, decisions in gen:
            count += 1
            if first is None:
                first = Assignment(tuple(v == 1 for v in vals[1:]))
            if mode != "count-all":
                break
    except _BudgetExceeded as exc:
        return SolveResult("unknown", first, None, exc.args[0])
    if mode == "count-all":
        return SolveResult("sat" if count else "unsat", first, count, decisions)
    if first is None:
        return SolveResult("unsat", None, 0, decisions)
    return SolveResult("sat", first, None, decisions)


def projected_model_count(c: CnfInstance, budget: int | None = None) -> int:
    """Number of distinct primary-variable projections among all models."""
    prim = sorted(c.varmap)
    return len({tuple(m.values[v - 1] for v in prim) for m in iter_models(c, budget)})


# -- decoding ---------------------------------------------------------------

def satisfies(c: CnfInstance, s: Assignment) -> bool:
    if len(s) < c.num_vars:
        return False
    return all(any(s.value(x) for x in cl) for cl in c.clauses)


def decode_and_verify(c: CnfInstance, s: Assignment) -> Decomposition:
    if not satisfies(c, s):
        raise UnsatisfiedAssignmentError("assignment does not satisfy the instance")
    if c.target is None or c.k is None:
        raise ValueError("instance carries no target matrix to decode against")
    n = c.target.n
    rows = [0] * n
    for var, (i, j) in c.varmap.items():
        if s.values[var - 1]:
            rows[i - 1] |= 1 << (j - 1)
    p = Gf2Matrix(rows, n)
    try:
        return Decomposition(p, add(c.target, p), c.k, c.target)
    except InvalidDecomposition as exc:
        raise EncoderBugError(f"decoded assignment is not a decomposition: {exc}") from exc
