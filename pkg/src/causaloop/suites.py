"""Named verification suites over a function space, as run by ``causaloop verify``."""

from __future__ import annotations

import random
import time
from typing import Iterable, Optional

from .antinomy import (
    DEFAULT_CAP,
    Failure,
    VerificationReport,
    Verdict,
    classify,
    enumerate_interventions,
    fixed_points,
    interventions_of,
    verify_corollary4,
    verify_equivalence,
    verify_lemma3,
    verify_theorem1,
    verify_transitivity,
    witness_lemma1,
)
from .census import SpaceSpec, enumerate_functions, function_at, function_count
from .errors import ArityError, TheoremViolation
from .induction import InducedFunction, find_nonconstancy, has_constant_components

SUITES = ("lemma1", "corollary2", "lemma3", "corollary4", "transitivity", "theorem1", "equivalence")


def tables(spec: SpaceSpec, cap: Optional[int], samples: Optional[int] = None, seed: int = 0) -> Iterable[InducedFunction]:
    """Every table of ``spec``, or ``samples`` seeded uniform draws from it."""
    if samples is None:
        return enumerate_functions(spec, cap)
    rng = random.Random(seed)
    total = function_count(spec)
    return (function_at(spec, rng.randrange(total)) for _ in range(samples))


def check_lemma1(omega: InducedFunction, cap: Optional[int] = DEFAULT_CAP, *, with_classify: bool = True) -> VerificationReport:
    """Both proof constructions work on every self-dependent component.

    With ``with_classify`` also checks that process functions have only
    constant components.
    """
    report = VerificationReport("lemma1")
    constant = True
    for k in range(omega.n):
        nc = find_nonconstancy(omega, k)
        if nc is None:
            continue
        constant = False
        report.instances += 1
        try:
            witness_lemma1(omega, k, nc.x, nc.y, nc.context)
        except TheoremViolation as exc:
            report.failures.append(Failure(omega, None, f"both antinomy witnesses for party {k}", str(exc)))
    if with_classify:
        report.instances += 1
        if classify(omega, cap).is_process and not constant:
            report.failures.append(Failure(omega, None, "constant components", "process function reads its own output"))
    return report


def check_corollary2(omega: InducedFunction, cap: Optional[int] = DEFAULT_CAP) -> VerificationReport:
    if omega.n != 1:
        raise ArityError("corollary2 concerns single-party functions")
    report = VerificationReport("corollary2", instances=1)
    c = classify(omega, cap)
    constant = len(set(omega.components[0])) == 1
    if c.is_process != constant:
        report.failures.append(Failure(omega, None, f"process iff constant (constant={constant})", c.verdict.value))
    if c.verdict is Verdict.ANTINOMIC:
        if len(fixed_points(omega, c.grandfather_witness)) != 0:
            report.failures.append(Failure(omega, c.grandfather_witness, "0 fixed points", "some"))
        if len(fixed_points(omega, c.information_witness)) < 2:
            report.failures.append(Failure(omega, c.information_witness, ">=2 fixed points", "fewer"))
    return report


def run_suite(
    name: str,
    spec: SpaceSpec,
    cap: Optional[int] = DEFAULT_CAP,
    *,
    samples: Optional[int] = None,
    seed: int = 0,
) -> VerificationReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if name == "corollary2" and spec.n != 1:
        raise ArityError("corollary2 needs --parties 1")
    if name in ("lemma3", "corollary4", "transitivity") and spec.n < 2:
        raise ArityError(f"{name} needs at least two parties")
    t0 = time.perf_counter()
    report = VerificationReport(name)
    for omega in tables(spec, cap, samples, seed):
        if name == "lemma1":
            report.absorb(check_lemma1(omega, cap))
        elif name == "corollary2":
            report.absorb(check_corollary2(omega, cap))
        elif name == "theorem1":
            report.absorb(verify_theorem1(omega, cap))
        elif name == "equivalence":
            report.absorb(verify_equivalence(omega, cap))
        elif not has_constant_components(omega):
            continue
        elif name == "transitivity":
            for k in range(omega.n):
                for f_k in interventions_of(omega, k):
                    report.absorb(verify_transitivity(omega, k, f_k, cap))
        else:
            for profile in enumerate_interventions(omega, cap):
                if name == "corollary4":
                    report.absorb(verify_corollary4(omega, profile))
                else:
                    for k in range(omega.n):
                        report.absorb(verify_lemma3(omega, profile, k))
    report.elapsed = time.perf_counter() - t0
    return report

