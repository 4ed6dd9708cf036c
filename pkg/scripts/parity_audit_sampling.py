"""Sample valid pairs (P idempotent, Q^3 = 0) and tally how often the six-word
identity evaluates to I. Each hit is checked for the parity consequences
(corank of P even, trace(P+Q) = 0).

    python scripts/parity_audit_sampling.py --n 4 8 --samples 20000
"""

import argparse
import random
from collections import Counter

from nilclean.gf2 import Gf2Matrix, conjugate, direct_sum, identity, rank, zero
from nilclean.search import parity_audit


def random_invertible(rng, n):
    while True:
        s = Gf2Matrix([rng.getrandbits(n) for _ in range(n)], n)
        if rank(s) == n:
            return s


def random_index3_nilpotent(rng, n):
    sizes, left = [], n
    while left:
        s = rng.randint(1, min(3, left))
        sizes.append(s)
        left -= s
    blocks = [Gf2Matrix([(1 << (i - 1)) if i else 0 for i in range(s)], s) for s in sizes]
    return conjugate(random_invertible(rng, n), direct_sum(blocks))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[4, 8])
    ap.add_argument("--samples", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    for n in args.n:
        tally = Counter()
        for _ in range(args.samples):
            r = rng.randint(0, n)
            p = conjugate(random_invertible(rng, n), direct_sum(identity(r), zero(n - r)))
            rec = parity_audit(p, random_index3_nilpotent(rng, n))
            tally["eq1_holds" if rec.eq1_holds else "eq1_fails"] += 1
            tally["consistent" if rec.consistent else "INCONSISTENT"] += 1
        print(f"n={n}: {dict(sorted(tally.items()))}")


if __name__ == "__main__":
    main()
