"""Build both antinomy witnesses for every self-dependent component in a
seeded sample of random function tables, and report how many fixed points
the information construction produces.

    python scripts/witness_sample.py --tables 10000 --seed 1
"""

import argparse
import random
from collections import Counter

from causaloop.antinomy import fixed_points, witness_lemma1
from causaloop.generators import random_omega
from causaloop.induction import find_nonconstancy


def main():
    parser = argparse.ArgumentParser(description="Self-dependence witness sampler")
    parser.add_argument("--tables", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    multiplicity = Counter()
    constant_tables = 0
    for _ in range(args.tables):
        omega = random_omega(rng)
        found = False
        for k in range(omega.n):
            nc = find_nonconstancy(omega, k)
            if nc is None:
                continue
            found = True
            w = witness_lemma1(omega, k, nc.x, nc.y, nc.context)  # raises if a construction fails
            multiplicity[len(fixed_points(omega, w.information))] += 1
        constant_tables += not found
    print(f"{args.tables} tables, {constant_tables} with only constant components")
    for count in sorted(multiplicity):
        print(f"  information witness with {count} fixed points: {multiplicity[count]} components")


if __name__ == "__main__":
    main()
