"""Finite directed graphs, causal structures with interventions, validation.

Vertex values are the integers ``0 .. size-1`` of the vertex alphabet.
Cartesian products are flattened with a mixed-radix encoding in which the
leftmost position (smallest vertex id, or first party) is most significant.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import prod
from typing import Iterable, Mapping, Sequence

from .errors import CyclicGraphError, OutOfRangeError, ValidationError


def strides(sizes: Sequence[int]) -> tuple[int, ...]:
    """Place value of every position in the mixed-radix encoding."""
    out = [1] * len(sizes)
    for pos in range(len(sizes) - 2, -1, -1):
        out[pos] = out[pos + 1] * sizes[pos + 1]
    return tuple(out)


def encode_tuple(values: Sequence[int], sizes: Sequence[int]) -> int:
    if len(values) != len(sizes):
        raise OutOfRangeError(f"tuple {tuple(values)} does not match sizes {tuple(sizes)}")
    index = 0
    for value, size in zip(values, sizes):
        if not 0 <= value < size:
            raise OutOfRangeError(f"value {value} outside 0..{size - 1}")
        index = index * size + value
    return index


def decode_tuple(index: int, sizes: Sequence[int]) -> tuple[int, ...]:
    total = prod(sizes)
    if not 0 <= index < total:
        raise OutOfRangeError(f"index {index} outside 0..{total - 1}")
    out = [0] * len(sizes)
    for pos in range(len(sizes) - 1, -1, -1):
        index, out[pos] = divmod(index, sizes[pos])
    return tuple(out)


@dataclass(frozen=True)
class Graph:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))

    def parents(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(u for u, w in self.edges if w == v))

    def children(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(w for u, w in self.edges if u == v))

    def ancestors(self, v: int) -> frozenset[int]:
        """Every ``u`` with a directed path ``u -> ... -> v`` of length >= 1."""
        preds: dict[int, list[int]] = {}
        for u, w in self.edges:
            preds.setdefault(w, []).append(u)
        seen: set[int] = set()
        stack = list(preds.get(v, ()))
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(preds.get(u, ()))
        return frozenset(seen)


def _find_cycle(vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> list[int]:
    # Every vertex left over by Kahn's algorithm has a leftover predecessor, so
    # walking predecessors backwards must revisit a vertex.
    remaining = set(vertices)
    preds: dict[int, list[int]] = {}
    for u, w in edges:
        if u in remaining and w in remaining:
            preds.setdefault(w, []).append(u)
    walk = [min(remaining)]
    position = {walk[0]: 0}
    while True:
        nxt = min(preds[walk[-1]])
        if nxt in position:
            cycle = walk[position[nxt]:] + [nxt]
            break
        position[nxt] = len(walk)
        walk.append(nxt)
    cycle.reverse()
    body = cycle[:-1]
    start = body.index(min(body))
    body = body[start:] + body[:start]
    return body + [body[0]]


def topological_order(graph: Graph) -> list[int]:
    """Kahn's algorithm with ascending-id tie-breaking.

    Raises :class:`CyclicGraphError` carrying a closed cycle ``[u, ..., u]``.
    """
    indegree = {v: 0 for v in graph.vertices}
    succs: dict[int, list[int]] = {v: [] for v in graph.vertices}
    for u, w in graph.edges:
        if u in indegree and w in indegree:
            indegree[w] += 1
            succs[u].append(w)
    ready = [v for v, d in indegree.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in succs[v]:
            indegree[w] -= 1
            if indegree[w] == 0:
                heapq.heappush(ready, w)
    if len(order) != len(indegree):
        left = set(indegree) - set(order)
        raise CyclicGraphError(_find_cycle(left, graph.edges))
    return order


@dataclass(frozen=True)
class MechanismTable:
    parent_order: tuple[int, ...]
    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parent_order", tuple(self.parent_order))
        object.__setattr__(self, "entries", tuple(self.entries))


@dataclass(frozen=True, eq=True)
class CausalStructure:
    """A graph with alphabets, mechanisms for non-party vertices, and parties.

    Construct through :meth:`build` unless you need to hand-craft a broken
    instance; the constructor performs no validation (see :func:`validate`).
    """

    graph: Graph
    alphabets: Mapping[int, int]
    mechanisms: Mapping[int, MechanismTable]
    parties: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphabets", dict(self.alphabets))
        object.__setattr__(self, "mechanisms", dict(self.mechanisms))
        object.__setattr__(self, "parties", tuple(self.parties))

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def build(
        cls,
        alphabets: Mapping[int, int],
        edges: Iterable[tuple[int, int]],
        parties: Iterable[int],
        mechanisms: Mapping[int, Sequence[int]],
    ) -> "CausalStructure":
        """Create a structure, inferring each mechanism's parent order."""
        graph = Graph(frozenset(alphabets), frozenset(edges))
        mechs = {
            v: MechanismTable(graph.parents(v), tuple(entries))
            for v, entries in mechanisms.items()
        }
        return cls(graph, alphabets, mechs, tuple(sorted(parties)))

    def parents(self, v: int) -> tuple[int, ...]:
        return self.graph.parents(v)

    def input_sizes(self) -> tuple[int, ...]:
        return tuple(
            prod(self.alphabets[u] for u in self.parents(p)) for p in self.parties
        )

    def output_sizes(self) -> tuple[int, ...]:
        return tuple(self.alphabets[p] for p in self.parties)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    where: int | tuple[int, int] | None = None


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()
    warnings: tuple[Violation, ...] = ()
    cut_cycle_witness: tuple[int, ...] | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def raise_for_violations(self):
        if self.violations:
            raise ValidationError(self)


def cut_graph(structure: CausalStructure) -> Graph:
    parties = set(structure.parties)
    kept = frozenset(e for e in structure.graph.edges if e[1] not in parties)
    return Graph(structure.graph.vertices, kept)


def relevant_vertices(structure: CausalStructure) -> frozenset[int]:
    """Vertices that can influence some party's input."""
    cut = cut_graph(structure)
    out: set[int] = set()
    for p in structure.parties:
        for u in structure.parents(p):
            out.add(u)
            out |= cut.ancestors(u)
    return frozenset(out)


def validate(structure: CausalStructure) -> ValidationReport:
    """Collect every violated invariant; never raises for bad input."""
    g = structure.graph
    alph = structure.alphabets
    parties = structure.parties
    bad: list[Violation] = []

    for v in sorted(g.vertices):
        if not isinstance(v, int) or v < 0:
            bad.append(Violation("BAD_VERTEX_ID", f"vertex id {v!r} is not a nonnegative integer", v))
    for u, w in sorted(g.edges):
        for end in (u, w):
            if end not in g.vertices:
                bad.append(Violation("UNDECLARED_VERTEX", f"edge {u}->{w} uses undeclared vertex {end}", (u, w)))

    for v in sorted(g.vertices):
        if v not in alph:
            bad.append(Violation("ALPHABET_MISSING", f"vertex {v} has no alphabet size", v))
        elif alph[v] < 2:
            bad.append(Violation("ALPHABET_TOO_SMALL", f"vertex {v} has alphabet size {alph[v]} < 2", v))
    for v in sorted(set(alph) - g.vertices):
        bad.append(Violation("UNDECLARED_VERTEX", f"alphabet given for undeclared vertex {v}", v))

    if not parties:
        bad.append(Violation("NONEMPTY_PARTIES", "the party set is empty"))
    seen: set[int] = set()
    for p in parties:
        if p in seen:
            bad.append(Violation("DUPLICATE_PARTY", f"party {p} listed twice", p))
        seen.add(p)
        if p not in g.vertices:
            bad.append(Violation("UNKNOWN_PARTY", f"party {p} is not a vertex", p))

    party_set = set(parties)
    for v in sorted(g.vertices):
        mech = structure.mechanisms.get(v)
        if v in party_set:
            if mech is not None:
                bad.append(Violation("PARTY_HAS_MECH", f"party {v} must not have a mechanism", v))
            continue
        if mech is None:
            bad.append(Violation("MISSING_MECH", f"vertex {v} has no mechanism", v))
            continue
        parents = g.parents(v)
        if mech.parent_order != parents:
            bad.append(Violation(
                "MECH_PARENT_ORDER",
                f"mechanism of {v} lists parents {mech.parent_order}, graph has {parents}", v))
            continue
        if any(alph.get(u, 0) < 2 for u in parents):
            continue  # already reported against the parent
        expected = prod(alph[u] for u in parents)
        if len(mech.entries) != expected:
            bad.append(Violation(
                "MECH_LENGTH", f"mechanism of {v} has {len(mech.entries)} entries, expected {expected}", v))
        size = alph.get(v)
        if size is not None and any(not 0 <= e < size for e in mech.entries):
            bad.append(Violation("MECH_ENTRY_RANGE", f"mechanism of {v} has an entry outside 0..{size - 1}", v))
    for v in sorted(set(structure.mechanisms) - g.vertices):
        bad.append(Violation("MECH_UNKNOWN_VERTEX", f"mechanism given for undeclared vertex {v}", v))

    witness = None
    try:
        topological_order(cut_graph(structure))
    except CyclicGraphError as exc:
        witness = tuple(exc.witness)
        bad.append(Violation("CUT_GRAPH_CYCLIC", f"cut graph has cycle {exc.witness}", exc.witness[0]))

    warnings: list[Violation] = []
    if witness is None and all(p in g.vertices for p in parties):
        relevant = relevant_vertices(structure)
        for v in sorted(g.vertices - party_set - relevant):
            warnings.append(Violation("IRRELEVANT_VERTEX", f"vertex {v} cannot influence any party input", v))

    return ValidationReport(tuple(bad), tuple(warnings), witness)
