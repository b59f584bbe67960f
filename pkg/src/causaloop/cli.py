"""Command-line interface.

Exit codes: 0 success (verdicts are data), 1 parse error, 2 validation
error, 3 cap exceeded, 4 theorem violation or failed verification,
5 bad arguments for the requested operation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from . import dsl
from .antinomy import DEFAULT_CAP, Verdict, classify, fixed_points, witness_search
from .census import SpaceSpec, run_census
from .core import CausalStructure, validate
from .errors import CapExceededError, CausaloopError, TheoremViolation, ValidationError
from .induction import InducedFunction, induce, reduce
from .suites import SUITES, run_suite

SCHEMA_VERSION = "1"

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_CAP, EXIT_THEOREM, EXIT_USAGE = range(6)


@dataclass
class RunConfig:
    command: str
    paths: list = field(default_factory=list)
    cap: int = DEFAULT_CAP
    workers: int = 1
    json: bool = False
    seed: int = 0
    timing: bool = False

    def __post_init__(self):
        if self.cap < 1:
            raise ValueError("cap must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


class _Done(Exception):
    def __init__(self, code, payload=None, text=None):
        self.code = code
        self.payload = payload
        self.text = text


def _tables(profile) -> list:
    return [list(t) for t in profile]


def _omega_dict(omega: InducedFunction) -> dict:
    return {
        "n": omega.n,
        "out_sizes": list(omega.out_sizes),
        "in_sizes": list(omega.in_sizes),
        "components": [list(c) for c in omega.components],
    }


def _violation_dict(v, line=None) -> dict:
    where = list(v.where) if isinstance(v.where, tuple) else v.where
    out = {"code": v.code, "message": v.message, "where": where}
    if line is not None:
        out["line"] = line
    return out


def _load(path):
    try:
        return dsl.load(path)
    except dsl.ParseError as exc:
        raise _Done(EXIT_PARSE, {"error": exc.to_dict()}, exc.render())
    except dsl.StructureValidationError as exc:
        payload = {
            "error": {"code": "VALIDATION", "message": str(exc)},
            "violations": [_violation_dict(v, a) for v, a in zip(exc.report.violations, exc.anchors)],
        }
        raise _Done(EXIT_VALIDATION, payload, str(exc))
    except OSError as exc:
        raise _Done(EXIT_USAGE, {"error": {"code": "IO", "message": str(exc)}}, str(exc))


def _load_omega(path) -> InducedFunction:
    obj = _load(path)
    return induce(obj) if isinstance(obj, CausalStructure) else obj


def _parse_table(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise _Done(EXIT_USAGE, {"error": {"code": "BAD_TABLE", "message": f"bad table {text!r}"}},
                    f"bad table {text!r}")


def _spec(args) -> SpaceSpec:
    n = args.parties
    if args.out_sizes:
        out = _parse_table(args.out_sizes)
    else:
        out = (2,) * n
    ins = _parse_table(args.in_sizes) if args.in_sizes else (2,) * n
    return SpaceSpec(n, out, ins, args.constant_components)


def _verdict_text(omega, c) -> str:
    if c.verdict is Verdict.PROCESS:
        return f"process function ({c.profile_count} profiles, one fixed point each)"
    lines = [f"antinomic ({c.profile_count} profiles)"]
    lines.append(f"  grandfather witness: {_tables(c.grandfather_witness)} -> no fixed point")
    pts = fixed_points(omega, c.information_witness).points
    lines.append(f"  information witness: {_tables(c.information_witness)} -> fixed points {[list(p) for p in pts]}")
    return "\n".join(lines)


def cmd_validate(cfg, args):
    path = args.path
    try:
        doc = dsl.SourceDocument.from_path(path)
        suffix = os.path.splitext(path)[1]
        if suffix == ".omega" or (suffix != ".cstruct" and dsl.detect_kind(doc) == "omega"):
            dsl.parse_omega(doc)
            return {"ok": True, "kind": "omega", "violations": [], "warnings": []}, "ok (function table)"
        structure = dsl.parse_structure(doc)
    except dsl.StructureValidationError as exc:
        report = exc.report
        payload = {
            "ok": False,
            "kind": "structure",
            "violations": [_violation_dict(v, a) for v, a in zip(report.violations, exc.anchors)],
            "warnings": [_violation_dict(v) for v in report.warnings],
            "cut_cycle_witness": list(report.cut_cycle_witness) if report.cut_cycle_witness else None,
        }
        raise _Done(EXIT_VALIDATION, payload, str(exc))
    except dsl.ParseError as exc:
        raise _Done(EXIT_PARSE, {"ok": False, "error": exc.to_dict()}, exc.render())
    except OSError as exc:
        raise _Done(EXIT_USAGE, {"error": {"code": "IO", "message": str(exc)}}, str(exc))
    report = validate(structure)
    payload = {
        "ok": True,
        "kind": "structure",
        "violations": [],
        "warnings": [_violation_dict(v) for v in report.warnings],
        "cut_cycle_witness": None,
    }
    text = "ok" + "".join(f"\nwarning: {v.code}: {v.message}" for v in report.warnings)
    return payload, text


def cmd_induce(cfg, args):
    omega = _load_omega(args.path)
    return {"omega": _omega_dict(omega)}, dsl.serialize(omega).rstrip("\n")


def cmd_classify(cfg, args):
    omega = _load_omega(args.path)
    c = classify(omega, cfg.cap, workers=cfg.workers)
    payload = {"verdict": c.verdict.value, "profile_count": c.profile_count}
    if c.verdict is Verdict.PROCESS:
        if args.fixed_points:
            payload["fixed_point_index"] = [list(c.fixed_point(i)) for i in range(c.profile_count)]
    else:
        payload["grandfather_witness"] = _tables(c.grandfather_witness)
        payload["information_witness"] = _tables(c.information_witness)
        payload["information_points"] = [list(p) for p in c.information_points]
    return payload, _verdict_text(omega, c)


def cmd_witness(cfg, args):
    omega = _load_omega(args.path)
    gf, info = witness_search(omega, cfg.cap, fast=not args.lexicographic)
    payload = {
        "grandfather": _tables(gf) if gf else None,
        "grandfather_fixed_points": [list(p) for p in fixed_points(omega, gf)] if gf else None,
        "information": _tables(info) if info else None,
        "information_fixed_points": [list(p) for p in fixed_points(omega, info)] if info else None,
    }
    if gf is None and info is None:
        text = "no witnesses: process function"
    else:
        text = (f"grandfather: {payload['grandfather']} -> {payload['grandfather_fixed_points']}\n"
                f"information: {payload['information']} -> {payload['information_fixed_points']}")
    return payload, text


def cmd_reduce(cfg, args):
    omega = _load_omega(args.path)
    k = args.party - 1
    red = reduce(omega, k, _parse_table(args.table))
    return {"party": args.party, "table": list(_parse_table(args.table)), "omega": _omega_dict(red)}, \
        dsl.serialize(red).rstrip("\n")


def cmd_census(cfg, args):
    spec = _spec(args)
    report = run_census(spec, cfg.workers, cfg.cap, representatives=args.representatives,
                        records=bool(args.records))
    if args.records:
        with open(args.records, "w", encoding="utf-8") as fh:
            for rec in report.records:
                fh.write(json.dumps(rec) + "\n")
    payload = report.to_dict()
    text = (f"{report.total} tables: {report.process_count} process, {report.antinomic_count} antinomic, "
            f"{report.equivalence_violations} equivalence violations")
    if report.equivalence_violations:
        raise _Done(EXIT_THEOREM, payload, text)
    return payload, text


def cmd_verify(cfg, args):
    spec = _spec(args)
    report = run_suite(args.suite, spec, cfg.cap, samples=args.samples, seed=cfg.seed)
    payload = {
        "suite": report.suite,
        "spec": spec.to_dict(),
        "instances": report.instances,
        "failures": [
            {"omega": _omega_dict(f.omega), "profile": _tables(f.profile) if f.profile else None,
             "expected": f.expected, "observed": f.observed}
            for f in report.failures
        ],
        "passed": report.passed,
    }
    text = f"{report.suite}: {report.instances} instances, {len(report.failures)} failures"
    if not report.passed:
        raise _Done(EXIT_THEOREM, payload, text)
    return payload, text


COMMANDS = {
    "validate": cmd_validate,
    "induce": cmd_induce,
    "classify": cmd_classify,
    "witness": cmd_witness,
    "reduce": cmd_reduce,
    "census": cmd_census,
    "verify": cmd_verify,
}


def _global_options(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=default(False), help="emit a JSON report")
    parser.add_argument("--cap", type=int, default=default(DEFAULT_CAP), help="largest enumeration allowed")
    parser.add_argument("--workers", type=int, default=default(os.cpu_count() or 1), help="worker processes")
    parser.add_argument("--seed", type=int, default=default(0), help="seed for sampled suites")
    parser.add_argument("--timing", action="store_true", default=default(False),
                        help="include wall-clock timing (makes JSON output nondeterministic)")


def _space_options(parser):
    parser.add_argument("--parties", type=int, required=True)
    parser.add_argument("--bits", action="store_true", help="all alphabets of size 2 (the default)")
    parser.add_argument("--out-sizes", help="comma-separated output alphabet sizes")
    parser.add_argument("--in-sizes", help="comma-separated input space sizes")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--constant-components", action="store_true",
                      help="only tables whose components ignore their own party's output")
    mode.add_argument("--unrestricted", dest="constant_components", action="store_false")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="causaloop", description=__doc__.split("\n")[0])
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)

    p = sub.add_parser("validate", parents=[common], help="parse and validate a file")
    p.add_argument("path")
    p = sub.add_parser("induce", parents=[common], help="print the induced function")
    p.add_argument("path")
    p = sub.add_parser("classify", parents=[common], help="process function or antinomic")
    p.add_argument("path")
    p.add_argument("--fixed-points", action="store_true", help="list the unique fixed point of every profile")
    p = sub.add_parser("witness", parents=[common], help="grandfather and information witnesses")
    p.add_argument("path")
    p.add_argument("--lexicographic", action="store_true", help="scan for the first witnesses instead of the lemma construction")
    p = sub.add_parser("reduce", parents=[common], help="swallow one party")
    p.add_argument("path")
    p.add_argument("--party", type=int, required=True, help="party number, from 1")
    p.add_argument("--table", required=True, help="comma-separated intervention table")
    p = sub.add_parser("census", parents=[common], help="classify a whole function space")
    _space_options(p)
    p.add_argument("--representatives", type=int, default=0)
    p.add_argument("--records", help="write one JSON line per table to this file")
    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    _space_options(p)
    p.add_argument("--samples", type=int, help="check this many seeded random tables instead of all")
    return parser


def _inputs(args) -> dict:
    skip = {"command", "json", "cap", "workers", "seed", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.command, [getattr(args, "path", None)], args.cap, args.workers,
                        args.json, args.seed, args.timing)
    except ValueError as exc:
        parser.error(str(exc))
    t0 = time.perf_counter()
    code, payload, text = EXIT_OK, None, None
    try:
        payload, text = COMMANDS[args.command](cfg, args)
    except _Done as done:
        code, payload, text = done.code, done.payload, done.text
    except CapExceededError as exc:
        code, payload, text = EXIT_CAP, {"error": {"code": exc.code, "message": str(exc)}}, str(exc)
    except TheoremViolation as exc:
        code, payload, text = EXIT_THEOREM, {"error": {"code": exc.code, "message": str(exc)}}, str(exc)
    except ValidationError as exc:
        code, payload, text = EXIT_VALIDATION, {"error": {"code": exc.code, "message": str(exc)}}, str(exc)
    except CausaloopError as exc:
        code, payload, text = EXIT_USAGE, {"error": {"code": exc.code, "message": str(exc)}}, str(exc)

    if cfg.json:
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": args.command,
            "inputs": _inputs(args),
            "config": {"cap": cfg.cap, "seed": cfg.seed},
            "result": payload,
            "exit_code": code,
            "timing": {"elapsed": time.perf_counter() - t0, "workers": cfg.workers} if cfg.timing else None,
        }
        print(json.dumps(report, indent=2))
    elif text is not None:
        print(text, file=sys.stdout if code == EXIT_OK else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
