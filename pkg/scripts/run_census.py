"""Census of process functions over small bit spaces.

    python scripts/run_census.py --max-parties 3 --workers 2 --out census.json
"""

import argparse
import json
import time

from causaloop.census import SpaceSpec, run_census


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--max-parties", type=int, default=3)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", help="write all reports to this JSON file")
    args = parser.parse_args()

    rows = []
    for n in range(1, args.max_parties + 1):
        modes = [True] if n > 2 else [False, True]  # n=3 unrestricted has 2**48 tables
        for restricted in modes:
            spec = SpaceSpec.bits(n, restricted)
            t0 = time.perf_counter()
            report = run_census(spec, args.workers, representatives=1)
            rows.append(report.to_dict())
            label = "constant components" if restricted else "unrestricted"
            print(f"n={n} {label:>19}: {report.total:>6} tables, {report.process_count:>5} process, "
                  f"{report.antinomic_count:>6} antinomic ({time.perf_counter() - t0:.2f} s)")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
