"""Command-line front end.

Exit codes: 0 found / verified / holds, 1 proven none / refuted,
2 unknown / exported, 64 usage error, 65 malformed input, 66 unreadable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from nilclean import __version__, sat
from nilclean.gf2 import (
    Gf2Matrix,
    add,
    format_matrix,
    matrix_c,
    mat_pow,
    parse_matrix,
)
from nilclean.ncpoly import derive_identity
from nilclean.poly import Gf2Poly
from nilclean.search import (
    InvalidDecomposition,
    SearchConfig,
    SearchReport,
    decompose,
    idempotent_count_formula,
    iter_idempotents,
    report_to_json,
    survey,
    theorem_check,
    verify_certificate,
)
from nilclean.similarity import frobenius_form, invariant_factors

EXIT_OK, EXIT_NONE, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_DATAERR, EXIT_NOINPUT = 64, 65, 66

STATUS_EXIT = {"found": EXIT_OK, "exhausted-none": EXIT_NONE, "exported": EXIT_UNKNOWN, "unknown": EXIT_UNKNOWN}
ANNIHILATOR = Gf2Poly.from_bitstring("10011")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _default_workers() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read {path}: {exc.strerror}") from exc


def _read_matrix(path: str) -> Gf2Matrix:
    return parse_matrix(_read(path))


def cmd_verify_c(args) -> int:
    c = matrix_c()
    c3 = mat_pow(c, 3)
    c4 = mat_pow(c, 4)
    value = add(add(c4, c3), mat_pow(c, 0))
    holds = value.is_zero()
    print(f"polynomial {ANNIHILATOR} ({ANNIHILATOR.to_bitstring()})")
    print("C =")
    print(format_matrix(c), end="")
    print("C^4 =")
    print(format_matrix(c4), end="")
    print("C^3 =")
    print(format_matrix(c3), end="")
    print("C^4 + C^3 + I =")
    print(format_matrix(value), end="")
    print("annihilates: " + ("yes" if holds else "no"))
    return EXIT_OK if holds else EXIT_NONE


def cmd_derive_identity(args) -> int:
    if args.index < 1:
        raise UsageError("--index must be >= 1")
    print(derive_identity(args.index))
    return EXIT_OK


def _emit(report: SearchReport, cert: str | None) -> int:
    text = report_to_json(report)
    sys.stdout.write(text)
    if cert:
        Path(cert).write_text(text)
    return STATUS_EXIT[report.status]


def cmd_decompose(args) -> int:
    a = _read_matrix(args.matrix)
    if args.index < 1:
        raise UsageError("--index must be >= 1")
    if args.strategy == "brute" and a.n > 4:
        raise UsageError("brute strategy is limited to n <= 4")
    config = SearchConfig(workers=args.workers, sat_budget=args.sat_budget, cnf_out=args.cnf_out)
    return _emit(decompose(a, args.index, args.strategy, config), args.emit_cert)


def cmd_theorem(args) -> int:
    m = args.copies
    if m < 1 or m % 2 == 0:
        raise UsageError("--copies must be odd: the statement concerns an odd number of copies of C")
    out = args.out or (f"theorem_m{m}_k3.cnf" if m > 1 else None)
    report = theorem_check(m, SearchConfig(workers=args.workers, cnf_out=out))
    if m > 1:
        report.extra["satisfiability"] = "unknown"
        print(f"exported {out}; satisfiability unknown, run an external solver", file=sys.stderr)
    return _emit(report, args.emit_cert)


def cmd_survey(args) -> int:
    if args.n < 1 or args.index < 1:
        raise UsageError("--n and --index must be >= 1")
    rows = survey(args.n, args.index, "stratified", SearchConfig(workers=args.workers))
    print("chain\tstatus\tspace_size\twitness_p")
    for row in rows:
        wit = row.report.witness.p.bitstring() if row.report.witness else "-"
        print(f"{row.cls.label()}\t{row.report.status}\t{row.report.space_size}\t{wit}")
    found = sum(r.report.status == "found" for r in rows)
    print(f"# n={args.n} k={args.index}: {found}/{len(rows)} classes decomposable", file=sys.stderr)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if args.strategy == "brute" and args.n > 4:
        raise UsageError("brute strategy is limited to n <= 4")
    count = 0
    for p in iter_idempotents(args.n, args.strategy):
        count += 1
        if not args.count_only:
            sys.stdout.write(format_matrix(p) + "\n")
    print(count if args.count_only else f"# {count} idempotents", file=sys.stdout if args.count_only else sys.stderr)
    expected = idempotent_count_formula(args.n)
    if count != expected:
        print(f"count {count} disagrees with the closed formula {expected}", file=sys.stderr)
        return EXIT_NONE
    return EXIT_OK


def cmd_export_cnf(args) -> int:
    a = _read_matrix(args.matrix)
    if args.index < 1:
        raise UsageError("--index must be >= 1")
    inst = sat.encode(a, args.index)
    Path(args.out).write_text(sat.to_dimacs(inst))
    print(json.dumps({"cnf": args.out, "num_vars": inst.num_vars, "num_clauses": len(inst.clauses),
                      "n": a.n, "k": args.index, "status": "exported"}, sort_keys=True))
    return EXIT_UNKNOWN


def cmd_import_solution(args) -> int:
    inst = sat.parse_dimacs(_read(args.cnf))
    if inst.target is None or inst.k is None:
        raise ValueError(f"{args.cnf} carries no target/index metadata")
    status, assignment = sat.parse_solver_output(_read(args.solution))
    if status != "sat":
        report = SearchReport(inst.target, inst.k, "unknown", "sat", 0,
                              extra={"external_claim": status, "solution": args.solution})
        return _emit(report, None)
    try:
        d = sat.decode_and_verify(inst, assignment)
    except (sat.UnsatisfiedAssignmentError, sat.EncoderBugError) as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_NONE
    return _emit(SearchReport(inst.target, inst.k, "found", "sat", 1, d), args.emit_cert)


def cmd_verify_cert(args) -> int:
    try:
        report = verify_certificate(_read(args.cert))
    except InvalidDecomposition as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_NONE
    print(f"certificate ok: status {report.status}, n={report.n}, k={report.k}")
    return EXIT_OK


def cmd_canonical_form(args) -> int:
    a = _read_matrix(args.matrix)
    chain = invariant_factors(a)
    print("invariant_factors " + " ".join(f.to_bitstring() for f in chain))
    print("# " + " | ".join(str(f) for f in chain))
    sys.stdout.write(format_matrix(frobenius_form(a)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nilclean", description="Nil-clean decompositions of matrices over GF(2).")
    parser.add_argument("--version", action="version", version=f"nilclean {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify-c", help="check that t^4+t^3+1 annihilates C")
    p.set_defaults(func=cmd_verify_c)

    p = sub.add_parser("derive-identity", help="reduced (P+Q)^4+(P+Q)^3 under P^2=P, Q^E=0")
    p.add_argument("--index", type=int, default=3)
    p.set_defaults(func=cmd_derive_identity)

    p = sub.add_parser("decompose", help="search A = P + Q with Q^K = 0")
    p.add_argument("--matrix", required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--strategy", choices=["brute", "stratified", "sat"], default="stratified")
    p.add_argument("--emit-cert")
    p.add_argument("--cnf-out", help="with --strategy sat, also write the DIMACS instance here")
    p.add_argument("--sat-budget", type=int, default=2_000_000, help="DPLL decision budget; 0 exports only")
    p.add_argument("--workers", type=int, default=_default_workers())
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("theorem", help="index-3 search on an odd direct sum of copies of C")
    p.add_argument("--copies", type=int, required=True)
    p.add_argument("--out", help="DIMACS output path for copies >= 3")
    p.add_argument("--emit-cert")
    p.add_argument("--workers", type=int, default=_default_workers())
    p.set_defaults(func=cmd_theorem)

    p = sub.add_parser("survey", help="decomposability of every similarity class of M_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--workers", type=int, default=_default_workers())
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("enumerate-idempotents")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--strategy", choices=["brute", "stratified"], default="stratified")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("export-cnf")
    p.add_argument("--matrix", required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_cnf)

    p = sub.add_parser("import-solution", help="decode and verify an external SAT solver answer")
    p.add_argument("--cnf", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--emit-cert")
    p.set_defaults(func=cmd_import_solution)

    p = sub.add_parser("verify-cert", help="re-verify a JSON certificate written by decompose")
    p.add_argument("--cert", required=True)
    p.set_defaults(func=cmd_verify_cert)

    p = sub.add_parser("canonical-form", help="invariant factors and Frobenius form")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_canonical_form)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"nilclean: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"nilclean: {exc}", file=sys.stderr)
        return EXIT_NOINPUT
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"nilclean: malformed input: {exc}", file=sys.stderr)
        return EXIT_DATAERR


if __name__ == "__main__":
    sys.exit(main())
