"""Induced functions of causal structures, constancy checks and reduction.

Parties are indexed ``0 .. n-1`` in ascending vertex-id order. A component
table ``components[k]`` has one entry per joint output ``o``, indexed by
``encode_tuple(o, out_sizes)``, holding the encoded input of party ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import prod
from typing import Optional, Sequence

from .core import CausalStructure, cut_graph, encode_tuple, topological_order, validate
from .errors import ArityError, NotConstantError, OutOfRangeError, ShapeMismatchError, ValidationError


@dataclass(frozen=True)
class InducedFunction:
    out_sizes: tuple[int, ...]
    in_sizes: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]
    origin: Optional[CausalStructure] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "out_sizes", tuple(self.out_sizes))
        object.__setattr__(self, "in_sizes", tuple(self.in_sizes))
        object.__setattr__(self, "components", tuple(tuple(c) for c in self.components))
        n = len(self.out_sizes)
        if n == 0:
            raise ShapeMismatchError("an induced function needs at least one party")
        if len(self.in_sizes) != n or len(self.components) != n:
            raise ShapeMismatchError(
                f"{n} output sizes, {len(self.in_sizes)} input sizes, {len(self.components)} components")
        if any(s < 1 for s in self.out_sizes + self.in_sizes):
            raise ShapeMismatchError("alphabet sizes must be positive")
        m = self.domain_size
        for k, (table, size) in enumerate(zip(self.components, self.in_sizes)):
            if len(table) != m:
                raise ShapeMismatchError(f"component {k} has {len(table)} entries, expected {m}")
            if any(not 0 <= e < size for e in table):
                raise OutOfRangeError(f"component {k} has an entry outside 0..{size - 1}")

    @property
    def n(self) -> int:
        return len(self.out_sizes)

    @property
    def domain_size(self) -> int:
        return prod(self.out_sizes)

    @cached_property
    def joint(self) -> tuple[tuple[int, ...], ...]:
        """``joint[o_index]`` is the full input tuple ``omega(o)``."""
        return tuple(zip(*self.components))

    def __call__(self, outputs: Sequence[int]) -> tuple[int, ...]:
        return self.joint[encode_tuple(outputs, self.out_sizes)]

    def component(self, k: int, outputs: Sequence[int]) -> int:
        return self.components[k][encode_tuple(outputs, self.out_sizes)]

    def outputs(self):
        """All joint outputs in encoded order."""
        return product(*(range(s) for s in self.out_sizes))

    def profile_count(self) -> int:
        return prod(o ** i for o, i in zip(self.out_sizes, self.in_sizes))

    @classmethod
    def from_callable(cls, out_sizes, in_sizes, fn) -> "InducedFunction":
        """Tabulate ``fn(o) -> tuple of party inputs`` over every joint output."""
        rows = [tuple(fn(o)) for o in product(*(range(s) for s in out_sizes))]
        return cls(tuple(out_sizes), tuple(in_sizes), tuple(zip(*rows)))


@dataclass(frozen=True)
class Intervention:
    party: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))

    def check(self, omega: InducedFunction):
        check_table(omega, self.party, self.table)


def check_table(omega: InducedFunction, k: int, table: Sequence[int]):
    if not 0 <= k < omega.n:
        raise ShapeMismatchError(f"party index {k} outside 0..{omega.n - 1}")
    if len(table) != omega.in_sizes[k]:
        raise ShapeMismatchError(
            f"intervention of party {k} has {len(table)} entries, expected {omega.in_sizes[k]}")
    if any(not 0 <= e < omega.out_sizes[k] for e in table):
        raise ShapeMismatchError(f"intervention of party {k} has an entry outside 0..{omega.out_sizes[k] - 1}")


def as_table(f) -> tuple[int, ...]:
    return f.table if isinstance(f, Intervention) else tuple(f)


def normalize_profile(omega: InducedFunction, profile) -> tuple[tuple[int, ...], ...]:
    """Accept Interventions or bare tables; return a tuple of tables in party order."""
    tables = tuple(as_table(f) for f in profile)
    if len(tables) != omega.n:
        raise ShapeMismatchError(f"profile has {len(tables)} interventions, expected {omega.n}")
    for k, table in enumerate(tables):
        check_table(omega, k, table)
    return tables


def induce(structure: CausalStructure) -> InducedFunction:
    """Forward-evaluate the cut graph once for every joint party output."""
    report = validate(structure)
    if not report.ok:
        raise ValidationError(report)
    parties = structure.parties
    party_set = set(parties)
    alph = structure.alphabets
    order = [v for v in topological_order(cut_graph(structure)) if v not in party_set]
    mechs = {}
    for v in order:
        mech = structure.mechanisms[v]
        sizes = tuple(alph[u] for u in mech.parent_order)
        mechs[v] = (mech.parent_order, sizes, mech.entries)
    in_parents = [(structure.parents(p), tuple(alph[u] for u in structure.parents(p))) for p in parties]
    out_sizes = structure.output_sizes()
    in_sizes = structure.input_sizes()

    rows = []
    for o in product(*(range(s) for s in out_sizes)):
        values = dict(zip(parties, o))
        for v in order:
            parents, sizes, entries = mechs[v]
            values[v] = entries[encode_tuple([values[u] for u in parents], sizes)]
        rows.append(tuple(encode_tuple([values[u] for u in pa], sz) for pa, sz in in_parents))
    return InducedFunction(out_sizes, in_sizes, tuple(zip(*rows)), origin=structure)


@dataclass(frozen=True)
class DependenceSet:
    party: int
    depends_on: frozenset[int]


def _differs_along(omega: InducedFunction, k: int, j: int) -> bool:
    table = omega.components[k]
    sizes = omega.out_sizes
    for o in omega.outputs():
        if o[j] != 0:
            continue
        base = table[encode_tuple(o, sizes)]
        for a in range(1, sizes[j]):
            if table[encode_tuple(o[:j] + (a,) + o[j + 1:], sizes)] != base:
                return True
    return False


def dependence_set(omega: InducedFunction, k: int) -> DependenceSet:
    return DependenceSet(k, frozenset(j for j in range(omega.n) if _differs_along(omega, k, j)))


def insert(context: Sequence[int], k: int, value: int) -> tuple[int, ...]:
    """Rebuild a full tuple from ``o_{\\k}`` and the value at position ``k``."""
    return tuple(context[:k]) + (value,) + tuple(context[k:])


@dataclass(frozen=True)
class NonConstancy:
    """Two outputs ``x != y`` of party ``k`` that change ``omega_k`` under ``context``."""

    party: int
    x: int
    y: int
    context: tuple[int, ...]


def find_nonconstancy(omega: InducedFunction, k: int) -> Optional[NonConstancy]:
    """First context (in encoded order) on which ``omega_k`` reads ``o_k``; ``x`` is always 0."""
    sizes = omega.out_sizes
    rest = sizes[:k] + sizes[k + 1:]
    table = omega.components[k]
    for context in product(*(range(s) for s in rest)):
        base = table[encode_tuple(insert(context, k, 0), sizes)]
        for y in range(1, sizes[k]):
            if table[encode_tuple(insert(context, k, y), sizes)] != base:
                return NonConstancy(k, 0, y, tuple(context))
    return None


def is_constant_component(omega: InducedFunction, k: int) -> bool:
    return find_nonconstancy(omega, k) is None


def has_constant_components(omega: InducedFunction) -> bool:
    return all(is_constant_component(omega, k) for k in range(omega.n))


def reduce(omega: InducedFunction, k: int, f_k) -> InducedFunction:
    """Swallow party ``k`` by plugging its intervention into the loop."""
    if omega.n < 2:
        raise ArityError("reduction needs at least two parties")
    table = as_table(f_k)
    check_table(omega, k, table)
    if not is_constant_component(omega, k):
        raise NotConstantError(f"component {k} depends on its own output")
    sizes = omega.out_sizes
    rest = sizes[:k] + sizes[k + 1:]
    comps = omega.components
    rows = []
    for context in product(*(range(s) for s in rest)):
        i_k = comps[k][encode_tuple(insert(context, k, 0), sizes)]
        full = encode_tuple(insert(context, k, table[i_k]), sizes)
        rows.append(tuple(comps[l][full] for l in range(omega.n) if l != k))
    in_rest = omega.in_sizes[:k] + omega.in_sizes[k + 1:]
    return InducedFunction(rest, in_rest, tuple(zip(*rows)))
