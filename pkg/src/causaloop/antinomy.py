"""Fixed points under intervention, classification and antinomy witnesses.

A *profile* is a tuple of intervention tables, one per party; table ``k``
maps encoded inputs of party ``k`` to outputs of party ``k``. Profiles are
enumerated in lexicographic order of their concatenated tables, which is
the same as counting up a mixed-radix integer whose most significant digit
is entry 0 of party 0's table.
"""

from __future__ import annotations

import enum
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .core import decode_tuple, encode_tuple, strides
from .errors import (
    ArityError,
    CapExceededError,
    NotANonconstancyWitnessError,
    NotConstantError,
    ShapeMismatchError,
    TheoremViolation,
)
from .induction import (
    InducedFunction,
    as_table,
    check_table,
    find_nonconstancy,
    has_constant_components,
    insert,
    normalize_profile,
    reduce,
)

DEFAULT_CAP = 2 ** 24

Profile = tuple[tuple[int, ...], ...]
Counter = Callable[[InducedFunction, Profile], int]


def check_cap(what: str, size: int, cap: Optional[int]):
    if cap is not None and size > cap:
        raise CapExceededError(what, size, cap)


def enumerate_interventions(omega: InducedFunction, cap: Optional[int] = DEFAULT_CAP) -> Iterator[Profile]:
    check_cap("intervention profiles", omega.profile_count(), cap)
    per_party = [
        list(product(range(o), repeat=i)) for o, i in zip(omega.out_sizes, omega.in_sizes)
    ]
    return product(*per_party)


def interventions_of(omega: InducedFunction, k: int) -> Iterator[tuple[int, ...]]:
    """Every intervention table of party ``k`` in lexicographic order."""
    return product(range(omega.out_sizes[k]), repeat=omega.in_sizes[k])


def _digit_radices(omega: InducedFunction) -> list[int]:
    return [o for o, i in zip(omega.out_sizes, omega.in_sizes) for _ in range(i)]


def profile_at(omega: InducedFunction, index: int) -> Profile:
    digits = decode_tuple(index, _digit_radices(omega))
    out, pos = [], 0
    for size in omega.in_sizes:
        out.append(digits[pos:pos + size])
        pos += size
    return tuple(out)


def profile_index(omega: InducedFunction, profile) -> int:
    tables = normalize_profile(omega, profile)
    return encode_tuple([e for t in tables for e in t], _digit_radices(omega))


@dataclass(frozen=True)
class FixedPointSet:
    points: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, item):
        return tuple(item) in self.points


def fixed_points(omega: InducedFunction, profile) -> FixedPointSet:
    """Every joint input ``i`` with ``i == omega(f(i))``.

    Fixed points are in bijection with outputs ``o`` satisfying
    ``f(omega(o)) == o``, so the scan runs over the output domain.
    """
    tables = normalize_profile(omega, profile)
    found = []
    for o_index, i in enumerate(omega.joint):
        o = tuple(t[v] for t, v in zip(tables, i))
        if encode_tuple(o, omega.out_sizes) == o_index:
            found.append(i)
    found.sort(key=lambda i: encode_tuple(i, omega.in_sizes))
    return FixedPointSet(tuple(found))


def count_fixed_points(omega: InducedFunction, profile) -> int:
    return len(fixed_points(omega, profile))


class _Kernel:
    """Vectorised fixed-point counting over a contiguous range of profiles."""

    def __init__(self, omega: InducedFunction):
        self.radix = np.array(_digit_radices(omega), dtype=np.int64)
        offsets = np.concatenate([[0], np.cumsum(omega.in_sizes)[:-1]]).astype(np.int64)
        joint = np.array(omega.joint, dtype=np.int64).reshape(omega.domain_size, omega.n)
        self.pos = joint + offsets
        self.ostrides = np.array(strides(omega.out_sizes), dtype=np.int64)
        self.target = np.arange(omega.domain_size, dtype=np.int64)
        self.point_codes = joint @ np.array(strides(omega.in_sizes), dtype=np.int64)
        self.block = max(1, (1 << 21) // (omega.domain_size * omega.n))

    def matches(self, start: int, stop: int) -> np.ndarray:
        """Boolean ``(stop-start, M)``: does output ``o`` give a fixed point of that profile."""
        idx = np.arange(start, stop, dtype=np.int64)
        digits = np.empty((len(idx), len(self.radix)), dtype=np.int64)
        for p in range(len(self.radix) - 1, -1, -1):
            idx, digits[:, p] = np.divmod(idx, self.radix[p])
        outs = digits[:, self.pos] @ self.ostrides
        return outs == self.target


@dataclass
class ProfileSweep:
    """Fixed-point statistics over ``scanned`` profiles in enumeration order."""

    total: int
    scanned: int = 0
    zero: int = 0
    multi: int = 0
    first_zero: Optional[int] = None
    first_multi: Optional[int] = None
    unique_points: Optional[list[int]] = None

    @property
    def unique(self) -> int:
        return self.scanned - self.zero - self.multi

    @property
    def complete(self) -> bool:
        return self.scanned == self.total

    def merge(self, other: "ProfileSweep") -> "ProfileSweep":
        def first(a, b):
            return b if a is None else a if b is None else min(a, b)

        points = None
        if self.unique_points is not None and other.unique_points is not None:
            points = self.unique_points + other.unique_points
        return ProfileSweep(
            self.total, self.scanned + other.scanned, self.zero + other.zero,
            self.multi + other.multi, first(self.first_zero, other.first_zero),
            first(self.first_multi, other.first_multi), points)


def _sweep_range(omega, start, stop, keep_points, stop_when_antinomic) -> ProfileSweep:
    kernel = _Kernel(omega)
    out = ProfileSweep(omega.profile_count(), unique_points=[] if keep_points else None)
    for lo in range(start, stop, kernel.block):
        hi = min(stop, lo + kernel.block)
        eq = kernel.matches(lo, hi)
        counts = eq.sum(axis=1)
        zeros = np.flatnonzero(counts == 0)
        multis = np.flatnonzero(counts >= 2)
        out.scanned += hi - lo
        out.zero += len(zeros)
        out.multi += len(multis)
        if out.first_zero is None and len(zeros):
            out.first_zero = lo + int(zeros[0])
        if out.first_multi is None and len(multis):
            out.first_multi = lo + int(multis[0])
        if out.unique_points is not None:
            if len(zeros) or len(multis):
                out.unique_points = None
            else:
                out.unique_points.extend(kernel.point_codes[eq.argmax(axis=1)].tolist())
        if stop_when_antinomic and out.first_zero is not None and out.first_multi is not None:
            break
    return out


def _sweep_counter(omega, counter, keep_points, stop_when_antinomic, cap) -> ProfileSweep:
    out = ProfileSweep(omega.profile_count(), unique_points=[] if keep_points else None)
    for index, profile in enumerate(enumerate_interventions(omega, cap)):
        c = counter(omega, profile)
        out.scanned += 1
        if c == 0:
            out.zero += 1
            if out.first_zero is None:
                out.first_zero = index
        elif c >= 2:
            out.multi += 1
            if out.first_multi is None:
                out.first_multi = index
        if out.unique_points is not None:
            pts = fixed_points(omega, profile).points
            if c == 1 and pts:
                out.unique_points.append(encode_tuple(pts[0], omega.in_sizes))
            else:
                out.unique_points = None
        if stop_when_antinomic and out.first_zero is not None and out.first_multi is not None:
            break
    return out


def _split(total: int, parts: int) -> list[tuple[int, int]]:
    bounds = [total * p // parts for p in range(parts + 1)]
    return [(a, b) for a, b in zip(bounds, bounds[1:]) if a < b]


PARALLEL_THRESHOLD = 1 << 16


def sweep(
    omega: InducedFunction,
    cap: Optional[int] = DEFAULT_CAP,
    *,
    keep_points: bool = False,
    stop_when_antinomic: bool = False,
    workers: int = 1,
    counter: Optional[Counter] = None,
) -> ProfileSweep:
    """Count fixed points for every intervention profile of ``omega``.

    ``counter`` replaces the built-in counting routine; it exists so the
    verifiers can be exercised against deliberately wrong counters.
    """
    total = omega.profile_count()
    check_cap("intervention profiles", total, cap)
    if counter is not None:
        return _sweep_counter(omega, counter, keep_points, stop_when_antinomic, cap)
    if workers <= 1 or total < PARALLEL_THRESHOLD:
        return _sweep_range(omega, 0, total, keep_points, stop_when_antinomic)
    ranges = _split(total, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_sweep_range, [omega] * len(ranges), [a for a, _ in ranges],
                              [b for _, b in ranges], [keep_points] * len(ranges),
                              [False] * len(ranges)))
    merged = parts[0]
    for part in parts[1:]:
        merged = merged.merge(part)
    return merged


class Verdict(str, enum.Enum):
    PROCESS = "process"
    ANTINOMIC = "antinomic"


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    profile_count: int
    fixed_point_index: Optional[tuple[int, ...]] = None
    grandfather_witness: Optional[Profile] = None
    information_witness: Optional[Profile] = None
    information_points: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None
    in_sizes: tuple[int, ...] = field(default=(), repr=False)

    @property
    def is_process(self) -> bool:
        return self.verdict is Verdict.PROCESS

    def fixed_point(self, profile_index: int) -> tuple[int, ...]:
        """The unique fixed point of the profile with the given enumeration index."""
        if self.fixed_point_index is None:
            raise ValueError("only process functions have a unique fixed point per profile")
        return decode_tuple(self.fixed_point_index[profile_index], self.in_sizes)


def classify(
    omega: InducedFunction,
    cap: Optional[int] = DEFAULT_CAP,
    *,
    workers: int = 1,
    counter: Optional[Counter] = None,
) -> Classification:
    """Process function or antinomic, with lexicographically first witnesses.

    Raises :class:`TheoremViolation` if a full enumeration turns up only one
    of the two antinomies.
    """
    s = sweep(omega, cap, keep_points=True, stop_when_antinomic=True, workers=workers, counter=counter)
    if s.first_zero is None and s.first_multi is None:
        return Classification(Verdict.PROCESS, s.total, tuple(s.unique_points), in_sizes=omega.in_sizes)
    if s.first_zero is None or s.first_multi is None:
        kind = "information" if s.first_zero is None else "grandfather"
        raise TheoremViolation(f"only the {kind} antinomy occurs over all {s.total} profiles")
    info = profile_at(omega, s.first_multi)
    pts = fixed_points(omega, info).points if counter is None else None
    return Classification(
        Verdict.ANTINOMIC,
        s.total,
        grandfather_witness=profile_at(omega, s.first_zero),
        information_witness=info,
        information_points=(pts[0], pts[1]) if pts and len(pts) >= 2 else None,
        in_sizes=omega.in_sizes,
    )


@dataclass(frozen=True)
class LemmaOneWitness:
    grandfather: Profile
    information: Profile
    points: tuple[tuple[int, ...], tuple[int, ...]]


def witness_lemma1(omega: InducedFunction, k: int, x: int, y: int, context: Sequence[int]) -> LemmaOneWitness:
    """Turn a self-dependence of ``omega_k`` into both antinomies.

    With ``a = omega_k(x, context)`` and ``b = omega_k(y, context)`` distinct,
    every other party outputs its context value. Party ``k`` answers ``a``
    with ``y`` and everything else with ``x`` to break every fixed point; it
    answers ``a`` with ``x`` and everything else with ``y`` to get two.
    """
    if not 0 <= k < omega.n:
        raise ShapeMismatchError(f"party index {k} outside 0..{omega.n - 1}")
    context = tuple(context)
    if len(context) != omega.n - 1:
        raise ShapeMismatchError(f"context has {len(context)} entries, expected {omega.n - 1}")
    a = omega.component(k, insert(context, k, x))
    b = omega.component(k, insert(context, k, y))
    if a == b:
        raise NotANonconstancyWitnessError(
            f"omega_{k} takes the same value {a} at outputs {x} and {y} under context {context}")

    def profile(on_a, otherwise):
        tables = []
        for l in range(omega.n):
            if l == k:
                tables.append(tuple(on_a if z == a else otherwise for z in range(omega.in_sizes[k])))
            else:
                c = context[l if l < k else l - 1]
                tables.append((c,) * omega.in_sizes[l])
        return tuple(tables)

    grandfather = profile(y, x)
    information = profile(x, y)
    for l, table in enumerate(information):
        check_table(omega, l, table)
    alpha = omega(insert(context, k, information[k][a]))
    beta = omega(insert(context, k, information[k][b]))
    pa = insert(alpha[:k] + alpha[k + 1:], k, a)
    pb = insert(beta[:k] + beta[k + 1:], k, b)

    if len(fixed_points(omega, grandfather)) != 0:
        raise TheoremViolation("grandfather construction has a fixed point")
    info_points = fixed_points(omega, information)
    if pa == pb or pa not in info_points or pb not in info_points:
        raise TheoremViolation("information construction lacks its two fixed points")
    return LemmaOneWitness(grandfather, information, (pa, pb))


def witness_search(omega: InducedFunction, cap: Optional[int] = DEFAULT_CAP, *, fast: bool = True):
    """Return ``(grandfather profile | None, information profile | None)``.

    With ``fast`` the first self-dependent component is fed to
    :func:`witness_lemma1`; otherwise, and whenever every component is
    constant, the profile space is scanned for the lexicographically first
    witness of each kind.
    """
    if fast:
        for k in range(omega.n):
            nc = find_nonconstancy(omega, k)
            if nc is not None:
                w = witness_lemma1(omega, k, nc.x, nc.y, nc.context)
                return w.grandfather, w.information
    s = sweep(omega, cap, stop_when_antinomic=True)
    gf = None if s.first_zero is None else profile_at(omega, s.first_zero)
    info = None if s.first_multi is None else profile_at(omega, s.first_multi)
    return gf, info


@dataclass(frozen=True)
class Failure:
    omega: InducedFunction
    profile: Optional[Profile]
    expected: str
    observed: str


@dataclass
class VerificationReport:
    suite: str
    instances: int = 0
    failures: list[Failure] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def absorb(self, other: "VerificationReport"):
        self.instances += other.instances
        self.failures.extend(other.failures)


def _require_constant(omega: InducedFunction):
    if omega.n < 2:
        raise ArityError("the reduction lemmas need at least two parties")
    if not has_constant_components(omega):
        raise NotConstantError("every component must be constant over its own party's output")


def _reduced(omega, tables, k):
    return reduce(omega, k, tables[k]), tables[:k] + tables[k + 1:]


def verify_lemma3(omega: InducedFunction, profile, k: int) -> VerificationReport:
    """Fixed points of ``omega . f`` and of the reduced loop correspond both ways."""
    t0 = time.perf_counter()
    _require_constant(omega)
    tables = normalize_profile(omega, profile)
    report = VerificationReport("lemma3", instances=1)
    full = fixed_points(omega, tables)
    red, red_tables = _reduced(omega, tables, k)
    red_points = fixed_points(red, red_tables)
    for i in full:
        proj = i[:k] + i[k + 1:]
        if proj not in red_points:
            report.failures.append(Failure(omega, tables, f"{proj} fixed after reducing party {k}", "missing"))
    for j in red_points:
        o_rest = tuple(red_tables[l][j[l]] for l in range(len(j)))
        i_k = omega.component(k, insert(o_rest, k, 0))
        ext = insert(j, k, i_k)
        if ext not in full:
            report.failures.append(Failure(omega, tables, f"{ext} fixed before reducing party {k}", "missing"))
    report.elapsed = time.perf_counter() - t0
    return report


def verify_corollary4(omega: InducedFunction, profile) -> VerificationReport:
    """Several fixed points survive some reduction; none survive every reduction."""
    t0 = time.perf_counter()
    _require_constant(omega)
    tables = normalize_profile(omega, profile)
    report = VerificationReport("corollary4", instances=1)
    pts = fixed_points(omega, tables).points
    if len(pts) >= 2:
        ell = next(p for p, (u, v) in enumerate(zip(pts[0], pts[1])) if u != v)
        k = 0 if ell != 0 else 1
        red, red_tables = _reduced(omega, tables, k)
        got = len(fixed_points(red, red_tables))
        if got < 2:
            report.failures.append(Failure(omega, tables, f">=2 fixed points after reducing party {k}", str(got)))
    elif not pts:
        for k in range(omega.n):
            red, red_tables = _reduced(omega, tables, k)
            got = len(fixed_points(red, red_tables))
            if got:
                report.failures.append(Failure(omega, tables, f"0 fixed points after reducing party {k}", str(got)))
    report.elapsed = time.perf_counter() - t0
    return report


def verify_transitivity(omega: InducedFunction, k: int, f_k, cap: Optional[int] = DEFAULT_CAP) -> VerificationReport:
    """Process and pseudo-process status pass to every reduced function."""
    t0 = time.perf_counter()
    if omega.n < 2:
        raise ArityError("reduction needs at least two parties")
    red = reduce(omega, k, as_table(f_k))
    check_cap("reduced intervention profiles", red.profile_count(), cap)
    s, r = sweep(omega, cap), sweep(red, cap)
    report = VerificationReport("transitivity", instances=1)
    if s.zero == 0 and r.zero:
        report.failures.append(Failure(red, None, "process function after reduction", f"{r.zero} profiles without fixed point"))
    if s.multi == 0 and r.multi:
        report.failures.append(Failure(red, None, "pseudo process function after reduction", f"{r.multi} profiles with several fixed points"))
    report.elapsed = time.perf_counter() - t0
    return report


def verify_theorem1(omega: InducedFunction, cap: Optional[int] = DEFAULT_CAP, *, counter: Optional[Counter] = None) -> VerificationReport:
    """At least one fixed point everywhere iff at most one everywhere iff exactly one."""
    t0 = time.perf_counter()
    s = sweep(omega, cap, counter=counter)
    report = VerificationReport("theorem1", instances=1)
    ge1, le1, eq1 = s.zero == 0, s.multi == 0, s.unique == s.total
    if not ge1 == le1 == eq1:
        report.failures.append(Failure(
            omega, None, "all three universal statements agree", f">=1: {ge1}, <=1: {le1}, ==1: {eq1}"))
    report.elapsed = time.perf_counter() - t0
    return report


def verify_equivalence(omega: InducedFunction, cap: Optional[int] = DEFAULT_CAP, *, counter: Optional[Counter] = None) -> VerificationReport:
    """Some profile has no fixed point iff some profile has several."""
    t0 = time.perf_counter()
    s = sweep(omega, cap, counter=counter)
    report = VerificationReport("equivalence", instances=1)
    if (s.zero > 0) != (s.multi > 0):
        report.failures.append(Failure(
            omega, None, "both antinomies or neither", f"grandfather: {s.zero > 0}, information: {s.multi > 0}"))
    report.elapsed = time.perf_counter() - t0
    return report
