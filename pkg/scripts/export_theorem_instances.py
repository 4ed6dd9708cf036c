"""Write the index-3 CNF instances for odd direct sums of C and, when an external
solver binary is on PATH, run it and record its answer next to the instance.

SAT answers are decoded and verified here. UNSAT answers are recorded with the
solver name and version string only; they are not re-checked.

    python scripts/export_theorem_instances.py --copies 3 5 --solver kissat
"""

import argparse
import json
import shutil
import subprocess
from pathlib import Path

from nilclean import sat
from nilclean.search import SearchConfig, theorem_check


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--copies", type=int, nargs="+", default=[3])
    ap.add_argument("--outdir", default="runs")
    ap.add_argument("--solver", help="solver executable, e.g. kissat, cadical, minisat")
    ap.add_argument("--timeout", type=int, default=3600)
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for m in args.copies:
        cnf = outdir / f"theorem_m{m}_k3.cnf"
        rep = theorem_check(m, SearchConfig(cnf_out=cnf))
        record = {"copies": m, "cnf": str(cnf), "num_vars": rep.extra["num_vars"],
                  "num_clauses": rep.extra["num_clauses"], "status": "unknown"}
        exe = shutil.which(args.solver) if args.solver else None
        if exe:
            version = subprocess.run([exe, "--version"], capture_output=True, text=True).stdout.strip()
            try:
                run = subprocess.run([exe, str(cnf)], capture_output=True, text=True, timeout=args.timeout)
                status, assignment = sat.parse_solver_output(run.stdout)
            except subprocess.TimeoutExpired:
                status, assignment = "unknown", None
            record.update(solver=args.solver, solver_version=version, external_status=status)
            if status == "sat":
                d = sat.decode_and_verify(rep.extra["instance"], assignment)
                record["status"] = "found"
                record["witness_p"] = d.p.row_strings()
        elif args.solver:
            record["note"] = f"solver {args.solver!r} not found on PATH"
        (outdir / f"theorem_m{m}_k3.json").write_text(json.dumps(record, indent=2) + "\n")
        print(json.dumps(record))


if __name__ == "__main__":
    main()
