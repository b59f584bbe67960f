"""Run every verification suite over the bit spaces that fit on a desk.

    python scripts/theorem_sweep.py
"""

import argparse
import sys

from causaloop.census import SpaceSpec
from causaloop.suites import run_suite

PLAN = [
    ("corollary2", SpaceSpec(1, (4,), (4,))),
    ("lemma1", SpaceSpec.bits(2)),
    ("theorem1", SpaceSpec.bits(2)),
    ("equivalence", SpaceSpec.bits(2)),
    ("equivalence", SpaceSpec.bits(3, True)),
    ("lemma3", SpaceSpec.bits(2, True)),
    ("corollary4", SpaceSpec.bits(2, True)),
    ("transitivity", SpaceSpec.bits(2, True)),
    ("transitivity", SpaceSpec.bits(3, True)),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--samples", type=int, help="sample this many tables from each space")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    failed = 0
    for suite, spec in PLAN:
        report = run_suite(suite, spec, samples=args.samples, seed=args.seed)
        failed += len(report.failures)
        shape = f"n={spec.n} out={list(spec.out_sizes)} in={list(spec.in_sizes)}"
        if spec.restrict_constant_components:
            shape += " constant"
        print(f"{suite:>12} {shape:<44} {report.instances:>7} instances "
              f"{len(report.failures)} failures {report.elapsed:6.2f} s")
        for f in report.failures[:3]:
            print(f"    {f.expected}: {f.observed}")
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
