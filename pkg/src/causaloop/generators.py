"""Seeded random causal structures and function tables."""

from __future__ import annotations

import random
from math import prod

from .core import CausalStructure
from .induction import InducedFunction


def random_structure(
    rng: random.Random,
    max_vertices: int = 6,
    max_size: int = 3,
    max_parties: int = 3,
    max_indegree: int = 3,
    edge_prob: float = 0.35,
    acyclic: bool = False,
) -> CausalStructure:
    """A valid structure whose cut graph is acyclic by construction.

    Non-party vertices only receive edges from parties or from earlier
    non-party vertices. With ``acyclic`` the whole graph follows one order.
    """
    nv = rng.randint(2, max_vertices)
    ids = sorted(rng.sample(range(32), nv))
    sizes = {v: rng.randint(2, max_size) for v in ids}
    parties = set(rng.sample(ids, rng.randint(1, min(max_parties, nv))))
    order = ids[:]
    rng.shuffle(order)
    rank = {v: i for i, v in enumerate(order)}

    def allowed(u, w):
        if acyclic:
            return rank[u] < rank[w]
        if w in parties:
            return True
        return u != w and (u in parties or rank[u] < rank[w])

    edges = set()
    for w in ids:
        candidates = [u for u in ids if allowed(u, w)]
        rng.shuffle(candidates)
        for u in candidates[:max_indegree]:
            if rng.random() < edge_prob:
                edges.add((u, w))

    mechanisms = {}
    for v in ids:
        if v in parties:
            continue
        parents = [u for u, w in edges if w == v]
        m = prod(sizes[u] for u in parents)
        mechanisms[v] = [rng.randrange(sizes[v]) for _ in range(m)]
    return CausalStructure.build(sizes, edges, parties, mechanisms)


def random_omega(
    rng: random.Random,
    max_parties: int = 3,
    max_out: int = 3,
    max_in: int = 3,
) -> InducedFunction:
    """An unrestricted function table with random shape."""
    n = rng.randint(1, max_parties)
    out_sizes = tuple(rng.randint(2, max_out) for _ in range(n))
    in_sizes = tuple(rng.randint(1, max_in) for _ in range(n))
    m = prod(out_sizes)
    comps = tuple(tuple(rng.randrange(s) for _ in range(m)) for s in in_sizes)
    return InducedFunction(out_sizes, in_sizes, comps)
