import random

import pytest

from causaloop.core import CausalStructure, cut_graph
from causaloop.dsl import load
from causaloop.errors import ArityError, NotConstantError, ShapeMismatchError, ValidationError
from causaloop.generators import random_structure
from causaloop.induction import (
    InducedFunction,
    Intervention,
    dependence_set,
    find_nonconstancy,
    induce,
    is_constant_component,
    reduce,
)
from conftest import C0, C1, FLIP, ID, bit_omega


def loop(mech):
    return CausalStructure.build({1: 2, 2: 2}, [(1, 2), (2, 1)], [1], {2: mech})


def test_identity_loop_induces_identity():
    omega = induce(loop([0, 1]))
    assert omega.components == ((0, 1),)
    assert omega.origin is not None


def test_not_loop_induces_flip():
    assert induce(loop([1, 0])).components == ((1, 0),)


def test_disconnected_parties_with_constant_sources():
    s = CausalStructure.build(
        {1: 2, 2: 2, 3: 2, 4: 2}, [(3, 1), (4, 2)], [1, 2], {3: [1], 4: [0]})
    omega = induce(s)
    assert omega.in_sizes == (2, 2)
    assert omega.components == ((1, 1, 1, 1), (0, 0, 0, 0))


def test_two_party_graph_shapes(fixtures_dir):
    omega = induce(load(fixtures_dir / "two_party_graph.cstruct"))
    assert omega.out_sizes == (2, 2)
    assert omega.in_sizes == (2, 4)  # party 7 reads X_2 x X_6
    for o4 in range(2):
        for o7 in range(2):
            assert omega((o4, o7)) == (o7, 2 * o7 + o4)


def test_induce_rejects_invalid():
    s = CausalStructure.build({1: 2, 2: 2}, [(1, 2), (2, 1)], [], {1: [0, 1], 2: [1, 0]})
    with pytest.raises(ValidationError):
        induce(s)


def test_induce_is_deterministic():
    rng = random.Random(3)
    for _ in range(50):
        s = random_structure(rng)
        assert induce(s) == induce(s)


def test_shape_checks():
    with pytest.raises(ShapeMismatchError):
        InducedFunction((2,), (2,), ((0, 1, 0),))
    with pytest.raises(Exception):
        InducedFunction((2,), (2,), ((0, 2),))


def test_dependence_set_examples(identity, constant0):
    assert dependence_set(identity, 0).depends_on == {0}
    assert dependence_set(constant0, 0).depends_on == set()
    copy_first = bit_omega((0, 0, 0, 0), (0, 0, 1, 1))
    # exhaustive scan: component 2 changes exactly when o1 changes
    assert dependence_set(copy_first, 1).depends_on == {0}
    assert dependence_set(copy_first, 0).depends_on == set()


def test_dependence_within_cut_graph_ancestors():
    rng = random.Random(11)
    for _ in range(200):
        s = random_structure(rng)
        omega = induce(s)
        cut = cut_graph(s)
        for k, p in enumerate(s.parties):
            reach = set()
            for u in s.parents(p):
                reach |= {u} | cut.ancestors(u)
            allowed = {j for j, q in enumerate(s.parties) if q in reach}
            assert dependence_set(omega, k).depends_on <= allowed


def test_constancy(identity, constant0, swap):
    assert not is_constant_component(identity, 0)
    nc = find_nonconstancy(identity, 0)
    assert (nc.x, nc.y, nc.context) == (0, 1, ())
    assert is_constant_component(constant0, 0)
    assert is_constant_component(swap, 0) and is_constant_component(swap, 1)


def test_reduce_examples(one_way, swap):
    # omega = (0, o1): omega_2(f_1(omega_1)) = f_1(0)
    assert reduce(one_way, 0, ID).components == ((0, 0),)
    assert reduce(one_way, 0, FLIP).components == ((1, 1),)
    # swap with f_1 = id: omega_2(o2) = f_1(o2) = o2
    assert reduce(swap, 0, Intervention(0, ID)).components == ((0, 1),)
    assert reduce(swap, 1, FLIP).components == ((1, 0),)


def test_reduce_pointwise_definition():
    rng = random.Random(5)
    from causaloop.census import SpaceSpec, function_at, function_count

    spec = SpaceSpec(3, (2, 3, 2), (2, 2, 3), True)
    for _ in range(100):
        omega = function_at(spec, rng.randrange(function_count(spec)))
        k = rng.randrange(3)
        f_k = tuple(rng.randrange(spec.out_sizes[k]) for _ in range(spec.in_sizes[k]))
        red = reduce(omega, k, f_k)
        assert red.out_sizes == spec.out_sizes[:k] + spec.out_sizes[k + 1:]
        for o_rest in red.outputs():
            full_k = omega.component(k, o_rest[:k] + (0,) + o_rest[k:])
            full = o_rest[:k] + (f_k[full_k],) + o_rest[k:]
            expected = tuple(omega.component(l, full) for l in range(3) if l != k)
            assert red(o_rest) == expected
        assert red.origin is None


def test_reduce_errors(identity, one_way):
    with pytest.raises(ArityError):
        reduce(bit_omega(C0), 0, ID)
    self_reading = bit_omega((0, 0, 1, 1), (0, 0, 0, 0))
    with pytest.raises(NotConstantError):
        reduce(self_reading, 0, ID)
    with pytest.raises(ShapeMismatchError):
        reduce(one_way, 0, (0, 1, 1))
    with pytest.raises(ShapeMismatchError):
        reduce(one_way, 0, (0, 2))


def test_callable_constructor(swap):
    built = InducedFunction.from_callable((2, 2), (2, 2), lambda o: (o[1], o[0]))
    assert built == swap
