"""Exhaustive enumeration of induced-function spaces and process-function census.

Function tables are enumerated party-major: the concatenation of all
component tables (each in encoded-domain order) counts up as a mixed-radix
integer. In restricted mode component ``k`` is stored over ``O_{\\k}`` only
and expanded to the full domain on construction.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product
from math import prod
from typing import Iterator, Optional

from .antinomy import DEFAULT_CAP, Verdict, check_cap, classify, enumerate_interventions
from .core import decode_tuple, encode_tuple
from .errors import ShapeMismatchError, TheoremViolation
from .induction import InducedFunction

__all__ = [
    "SpaceSpec",
    "CensusReport",
    "enumerate_interventions",
    "enumerate_functions",
    "function_count",
    "function_at",
    "run_census",
]


@dataclass(frozen=True)
class SpaceSpec:
    n: int
    out_sizes: tuple[int, ...]
    in_sizes: tuple[int, ...]
    restrict_constant_components: bool = False

    def __post_init__(self):
        object.__setattr__(self, "out_sizes", tuple(self.out_sizes))
        object.__setattr__(self, "in_sizes", tuple(self.in_sizes))
        if self.n < 1 or len(self.out_sizes) != self.n or len(self.in_sizes) != self.n:
            raise ShapeMismatchError(f"need {self.n} output and input sizes")
        if any(s < 2 for s in self.out_sizes):
            raise ShapeMismatchError("output alphabets need at least two values")
        if any(s < 1 for s in self.in_sizes):
            raise ShapeMismatchError("input spaces need at least one value")

    @classmethod
    def bits(cls, n: int, restricted: bool = False) -> "SpaceSpec":
        return cls(n, (2,) * n, (2,) * n, restricted)

    @property
    def domain_size(self) -> int:
        return prod(self.out_sizes)

    def free_entries(self, k: int) -> int:
        """Number of independently chosen entries in component ``k``."""
        m = self.domain_size
        return m // self.out_sizes[k] if self.restrict_constant_components else m

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "out_sizes": list(self.out_sizes),
            "in_sizes": list(self.in_sizes),
            "restrict_constant_components": self.restrict_constant_components,
        }


def function_count(spec: SpaceSpec) -> int:
    return prod(spec.in_sizes[k] ** spec.free_entries(k) for k in range(spec.n))


def _expand(spec: SpaceSpec, k: int, free: tuple[int, ...]) -> tuple[int, ...]:
    if not spec.restrict_constant_components:
        return free
    sizes = spec.out_sizes
    rest = sizes[:k] + sizes[k + 1:]
    return tuple(
        free[encode_tuple(o[:k] + o[k + 1:], rest)]
        for o in product(*(range(s) for s in sizes))
    )


def function_at(spec: SpaceSpec, index: int) -> InducedFunction:
    radices = [spec.in_sizes[k] for k in range(spec.n) for _ in range(spec.free_entries(k))]
    digits = decode_tuple(index, radices)
    comps, pos = [], 0
    for k in range(spec.n):
        width = spec.free_entries(k)
        comps.append(_expand(spec, k, digits[pos:pos + width]))
        pos += width
    return InducedFunction(spec.out_sizes, spec.in_sizes, tuple(comps))


def enumerate_functions(spec: SpaceSpec, cap: Optional[int] = DEFAULT_CAP) -> Iterator[InducedFunction]:
    check_cap("function tables", function_count(spec), cap)
    per_party = [
        [_expand(spec, k, t) for t in product(range(spec.in_sizes[k]), repeat=spec.free_entries(k))]
        for k in range(spec.n)
    ]
    for comps in product(*per_party):
        yield InducedFunction(spec.out_sizes, spec.in_sizes, comps)


@dataclass
class CensusReport:
    spec: SpaceSpec
    total: int
    process_count: int
    antinomic_count: int
    equivalence_violations: int
    representatives: dict = field(default_factory=dict)
    records: Optional[list] = None
    elapsed: float = 0.0
    workers: int = 1

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "spec": self.spec.to_dict(),
            "total": self.total,
            "process_count": self.process_count,
            "antinomic_count": self.antinomic_count,
            "equivalence_violations": self.equivalence_violations,
            "representatives": self.representatives,
        }
        if timing:
            out["elapsed"] = self.elapsed
            out["workers"] = self.workers
        return out


def table_record(index: int, omega: InducedFunction, cap: Optional[int]) -> dict:
    """One JSON-Lines record for the table at ``index``."""
    try:
        c = classify(omega, cap)
    except TheoremViolation as exc:
        return {"index": index, "verdict": "violation", "witnesses": {}, "detail": str(exc)}
    witnesses = {}
    if c.verdict is Verdict.ANTINOMIC:
        witnesses = {
            "grandfather": [list(t) for t in c.grandfather_witness],
            "information": [list(t) for t in c.information_witness],
        }
    return {"index": index, "verdict": c.verdict.value, "witnesses": witnesses}


def _census_chunk(spec, start, stop, cap, keep, with_records):
    counts = {"process": 0, "antinomic": 0, "violation": 0}
    reps = {"process": [], "antinomic": []}
    records = [] if with_records else None
    for index in range(start, stop):
        omega = function_at(spec, index)
        rec = table_record(index, omega, cap)
        verdict = rec["verdict"]
        counts[verdict] += 1
        if verdict in reps and len(reps[verdict]) < keep:
            reps[verdict].append({"index": index, "components": [list(c) for c in omega.components]})
        if records is not None:
            records.append(rec)
    return counts, reps, records


def run_census(
    spec: SpaceSpec,
    workers: int = 1,
    cap: Optional[int] = DEFAULT_CAP,
    *,
    representatives: int = 0,
    records: bool = False,
) -> CensusReport:
    """Classify every table in ``spec``; identical output for any worker count."""
    t0 = time.perf_counter()
    total = function_count(spec)
    check_cap("function tables", total, cap)
    check_cap("intervention profiles", prod(o ** i for o, i in zip(spec.out_sizes, spec.in_sizes)), cap)
    chunks = max(1, min(total, workers * 4))
    bounds = [total * c // chunks for c in range(chunks + 1)]
    args = [(spec, a, b, cap, representatives, records) for a, b in zip(bounds, bounds[1:])]
    if workers <= 1:
        parts = [_census_chunk(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_census_chunk, *zip(*args)))

    counts = {"process": 0, "antinomic": 0, "violation": 0}
    reps = {"process": [], "antinomic": []}
    all_records = [] if records else None
    for part_counts, part_reps, part_records in parts:
        for key in counts:
            counts[key] += part_counts[key]
        for key in reps:
            reps[key].extend(part_reps[key][: representatives - len(reps[key])])
        if all_records is not None:
            all_records.extend(part_records)
    return CensusReport(
        spec,
        total,
        counts["process"],
        counts["antinomic"] + counts["violation"],
        counts["violation"],
        reps if representatives else {},
        all_records,
        time.perf_counter() - t0,
        workers,
    )
