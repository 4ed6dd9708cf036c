"""Which similarity classes of M_n(GF(2)) fail to decompose at a given index?

Marks classes whose rational form contains a companion block of t^4+t^3+1
(i.e. the polynomial divides some invariant factor), which is the pattern
behind the index-3 failures of C.

    python scripts/survey_rational_blocks.py --n 5 --index 3
"""

import argparse
import time

from nilclean.poly import Gf2Poly
from nilclean.search import SearchConfig, survey

C_POLY = Gf2Poly.from_bitstring("10011")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--index", type=int, default=3)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    t0 = time.perf_counter()
    rows = survey(args.n, args.index, "stratified", SearchConfig(workers=args.workers))
    failing = [r for r in rows if r.decomposable is False]
    print(f"n={args.n} k={args.index}: {len(rows)} classes, {len(failing)} without a decomposition "
          f"({time.perf_counter() - t0:.1f} s)")
    for r in rows:
        has_c = any(C_POLY.divides(f) for f in r.cls.invariant_factors)
        flag = "C-block" if has_c else ""
        print(f"{r.cls.label():<30} {r.report.status:<15} {flag}")
    with_c = [r for r in rows if any(C_POLY.divides(f) for f in r.cls.invariant_factors)]
    print(f"classes with a C block: {len(with_c)}, of which decomposable: "
          f"{sum(bool(r.decomposable) for r in with_c)}")


if __name__ == "__main__":
    main()
