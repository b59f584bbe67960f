import random
import re

import pytest

from causaloop.census import SpaceSpec, enumerate_functions
from causaloop.core import CausalStructure, cut_graph, topological_order
from causaloop.dsl import (
    ParseError,
    SourceDocument,
    StructureValidationError,
    load,
    parse_omega,
    parse_structure,
    serialize,
)
from causaloop.generators import random_structure
from causaloop.induction import induce
from conftest import FIXTURES, MALFORMED

NOT_LOOP = "vertex 1 2\nvertex 2 2\nedge 1 2\nedge 2 1\nparty 1\nmech 2 : 1 0\n"


def test_not_loop_parses():
    s = parse_structure(NOT_LOOP)
    assert s == CausalStructure.build({1: 2, 2: 2}, [(1, 2), (2, 1)], [1], {2: [1, 0]})
    assert serialize(s) == NOT_LOOP


def test_comments_tabs_and_blank_lines():
    text = "# header\n\nvertex\t1   2 # trailing\nvertex 2 2\nedge 1 2\nedge 2 1\n  party 1\nmech 2 :\t1 0\n"
    assert parse_structure(text) == parse_structure(NOT_LOOP)


def test_two_party_graph_fixture():
    s = load(FIXTURES / "two_party_graph.cstruct")
    assert s.parties == (4, 7)
    assert len(s.graph.vertices) == 7
    assert s.parents(7) == (2, 6)
    assert s.parents(4) == (3,)
    topological_order(cut_graph(s))


def test_party_mech_is_a_validation_error():
    text = "vertex 4 2\nvertex 5 2\nedge 4 5\nparty 4\nmech 5 : 0 1\nmech 4 : 0 1\n"
    with pytest.raises(StructureValidationError) as exc:
        parse_structure(text)
    assert exc.value.report.codes == ["PARTY_HAS_MECH"]
    assert exc.value.line == 6


def test_identity_omega():
    omega = parse_omega("omega 1\nout 2\nin 2\ncomponent 1 : 0 1\n")
    assert omega.components == ((0, 1),)


def test_swap_omega_encoding():
    omega = parse_omega("omega 2\nout 2 2\nin 2 2\ncomponent 1 : 0 1 0 1\ncomponent 2 : 0 0 1 1\n")
    for o1 in range(2):
        for o2 in range(2):
            assert omega((o1, o2)) == (o2, o1)


def test_length_mismatch_line():
    with pytest.raises(ParseError) as exc:
        parse_omega("omega 1\nout 2 2\n")
    assert exc.value.code == "BAD_ARITY"
    with pytest.raises(ParseError) as exc:
        parse_omega("omega 2\nout 2 2\nin 2 2\ncomponent 1 : 0 1 0\n")
    assert (exc.value.code, exc.value.line) == ("LENGTH_MISMATCH", 4)


def _expectation(path):
    m = re.match(r"# expect: (\w+) @ (\d+)", path.read_text().splitlines()[0])
    return m.group(1), int(m.group(2))


@pytest.mark.parametrize("path", sorted(MALFORMED.iterdir()), ids=lambda p: p.name)
def test_malformed_corpus_is_line_anchored(path):
    code, line = _expectation(path)
    with pytest.raises((ParseError, StructureValidationError)) as exc:
        load(path)
    err = exc.value
    if isinstance(err, ParseError):
        assert (err.code, err.line) == (code, line)
        assert str(line) in err.render()
    else:
        assert code in err.report.codes
        anchors = dict(zip(err.report.codes, err.anchors))
        assert anchors[code] == line


def test_parse_error_names_token():
    with pytest.raises(ParseError) as exc:
        parse_structure("vertex 1 2\nvertex 2 x\n")
    err = exc.value
    assert (err.line, err.column, err.code) == (2, 10, "BAD_INTEGER")
    assert "'x'" in err.message
    assert err.excerpt == "vertex 2 x"


@pytest.mark.parametrize("path", sorted(FIXTURES.iterdir()), ids=lambda p: p.name)
def test_fixture_roundtrip(path):
    obj = load(path)
    text = serialize(obj)
    again = parse_omega(text) if path.suffix == ".omega" else parse_structure(text)
    assert again == obj
    assert serialize(again) == text


def test_random_structure_roundtrip():
    rng = random.Random(0)
    for _ in range(1000):
        s = random_structure(rng)
        text = serialize(s)
        assert parse_structure(text) == s
        assert serialize(parse_structure(text)) == text


def test_census_tables_roundtrip():
    for omega in enumerate_functions(SpaceSpec.bits(2)):
        assert parse_omega(serialize(omega)) == omega


def test_induced_serialisation_is_stable():
    s = load(FIXTURES / "two_party_graph.cstruct")
    assert serialize(induce(s)) == serialize(induce(parse_structure(serialize(s))))


def test_source_document_lines():
    doc = SourceDocument("# c\n\nvertex 1 2\n")
    assert [(l.number, [t.text for t in l.tokens]) for l in doc.lines] == [(3, ["vertex", "1", "2"])]
