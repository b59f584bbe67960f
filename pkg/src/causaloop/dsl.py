"""Line-oriented text formats for causal structures (``.cstruct``) and
induced-function tables (``.omega``).

Structure files::

    vertex <id> <alphabet-size>
    edge <src> <dst>
    party <id>
    mech <id> : <v0> <v1> ...

Function files::

    omega <n>
    out <s1> ... <sn>
    in <t1> ... <tn>
    component <k> : <e0> ... <e_{M-1}>

``#`` starts a comment; tokens are separated by spaces or tabs. Parties in
``component`` lines are numbered from 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import prod
from pathlib import Path
from typing import Optional, Union

from .core import CausalStructure, Graph, MechanismTable, Violation, validate
from .errors import CausaloopError, ValidationError
from .induction import InducedFunction

_TOKEN = re.compile(r"[^ \t]+")


@dataclass(frozen=True)
class Token:
    text: str
    column: int


@dataclass(frozen=True)
class Line:
    number: int
    raw: str
    tokens: tuple[Token, ...]


@dataclass(frozen=True)
class SourceDocument:
    text: str
    name: str = "<string>"

    @classmethod
    def from_path(cls, path) -> "SourceDocument":
        path = Path(path)
        return cls(path.read_text(encoding="utf-8"), str(path))

    @property
    def lines(self) -> list[Line]:
        """Non-blank lines with comments stripped, numbered from 1."""
        out = []
        for number, raw in enumerate(self.text.splitlines(), start=1):
            body = raw.split("#", 1)[0]
            tokens = tuple(Token(m.group(), m.start() + 1) for m in _TOKEN.finditer(body))
            if tokens:
                out.append(Line(number, raw, tokens))
        return out


class ParseError(CausaloopError):
    def __init__(self, code, message, line=None, column=None, excerpt="", source="<string>"):
        self.code = code
        self.line = line
        self.column = column
        self.excerpt = excerpt
        self.source = source
        self.message = message
        super().__init__(self.render())

    def render(self) -> str:
        where = self.source
        if self.line is not None:
            where += f":{self.line}"
            if self.column is not None:
                where += f":{self.column}"
        text = f"{where}: {self.code}: {self.message}"
        if self.excerpt:
            text += f"\n    {self.excerpt}"
            if self.column is not None:
                text += "\n    " + " " * (self.column - 1) + "^"
        return text

    def to_dict(self) -> dict:
        return {"code": self.code, "line": self.line, "column": self.column,
                "message": self.message, "excerpt": self.excerpt}


class StructureValidationError(ValidationError):
    """Semantic violations, each anchored to a source line where possible."""

    def __init__(self, report, anchors, source="<string>"):
        self.anchors = anchors
        self.source = source
        parts = []
        for v, line in zip(report.violations, anchors):
            where = f"{source}:{line}" if line is not None else source
            parts.append(f"{where}: {v.code}: {v.message}")
        super().__init__(report, "\n".join(parts))

    @property
    def line(self) -> Optional[int]:
        return next((a for a in self.anchors if a is not None), None)


def _err(doc, line: Line, token: Optional[Token], code: str, message: str):
    return ParseError(code, message, line.number, token.column if token else None,
                      line.raw.rstrip("\n"), doc.name)


def _int(doc, line, token, minimum=0) -> int:
    if not re.fullmatch(r"\d+", token.text):
        raise _err(doc, line, token, "BAD_INTEGER", f"expected a nonnegative integer, got {token.text!r}")
    value = int(token.text)
    if value < minimum:
        raise _err(doc, line, token, "BAD_INTEGER", f"expected an integer >= {minimum}, got {value}")
    return value


def _arity(doc, line, count):
    if len(line.tokens) != count:
        bad = line.tokens[count] if len(line.tokens) > count else None
        raise _err(doc, line, bad, "BAD_ARITY",
                   f"{line.tokens[0].text!r} takes {count - 1} arguments, got {len(line.tokens) - 1}")


def _table(doc, line):
    """``<kw> <id> : <e0> ...`` -> (id token, entry tokens)."""
    if len(line.tokens) < 3:
        raise _err(doc, line, None, "BAD_ARITY", f"{line.tokens[0].text!r} needs an id, ':' and entries")
    if line.tokens[2].text != ":":
        raise _err(doc, line, line.tokens[2], "MISSING_COLON", "expected ':' after the id")
    return line.tokens[1], line.tokens[3:]


def _as_doc(doc) -> SourceDocument:
    return doc if isinstance(doc, SourceDocument) else SourceDocument(doc)


def parse_structure(doc: Union[SourceDocument, str]) -> CausalStructure:
    doc = _as_doc(doc)
    alphabets: dict[int, int] = {}
    edges: set[tuple[int, int]] = set()
    parties: list[int] = []
    mechs: dict[int, tuple[int, ...]] = {}
    where_vertex: dict[int, int] = {}
    where_edge: dict[tuple[int, int], int] = {}
    where_party: dict[int, int] = {}
    where_mech: dict[int, int] = {}

    for line in doc.lines:
        kw = line.tokens[0]
        if kw.text == "vertex":
            _arity(doc, line, 3)
            v = _int(doc, line, line.tokens[1])
            size = _int(doc, line, line.tokens[2])
            if v in alphabets:
                raise _err(doc, line, line.tokens[1], "DUPLICATE_VERTEX",
                           f"vertex {v} already declared on line {where_vertex[v]}")
            alphabets[v] = size
            where_vertex[v] = line.number
        elif kw.text == "edge":
            _arity(doc, line, 3)
            e = (_int(doc, line, line.tokens[1]), _int(doc, line, line.tokens[2]))
            if e in edges:
                raise _err(doc, line, line.tokens[1], "DUPLICATE_EDGE",
                           f"edge {e[0]} {e[1]} already declared on line {where_edge[e]}")
            edges.add(e)
            where_edge[e] = line.number
        elif kw.text == "party":
            _arity(doc, line, 2)
            p = _int(doc, line, line.tokens[1])
            if p in where_party:
                raise _err(doc, line, line.tokens[1], "DUPLICATE_PARTY",
                           f"party {p} already declared on line {where_party[p]}")
            parties.append(p)
            where_party[p] = line.number
        elif kw.text == "mech":
            ident, entries = _table(doc, line)
            v = _int(doc, line, ident)
            if v in mechs:
                raise _err(doc, line, ident, "DUPLICATE_MECH",
                           f"mechanism of {v} already given on line {where_mech[v]}")
            mechs[v] = tuple(_int(doc, line, t) for t in entries)
            where_mech[v] = line.number
        else:
            raise _err(doc, line, kw, "UNKNOWN_DIRECTIVE", f"unknown directive {kw.text!r}")

    graph = Graph(frozenset(alphabets), frozenset(edges))
    structure = CausalStructure(
        graph, alphabets,
        {v: MechanismTable(graph.parents(v), e) for v, e in mechs.items()},
        tuple(sorted(parties)),
    )
    report = validate(structure)
    if not report.ok:
        def anchor(v: Violation) -> Optional[int]:
            if v.code in ("CUT_GRAPH_CYCLIC",) and report.cut_cycle_witness:
                w = report.cut_cycle_witness
                return where_edge.get((w[0], w[1]))
            if v.code in ("PARTY_HAS_MECH", "MECH_LENGTH", "MECH_ENTRY_RANGE",
                          "MECH_PARENT_ORDER", "MECH_UNKNOWN_VERTEX"):
                return where_mech.get(v.where)
            if v.code in ("UNKNOWN_PARTY", "DUPLICATE_PARTY"):
                return where_party.get(v.where)
            if isinstance(v.where, tuple):
                return where_edge.get(v.where)
            if v.where is not None:
                return where_vertex.get(v.where, where_mech.get(v.where))
            return None

        raise StructureValidationError(report, [anchor(v) for v in report.violations], doc.name)
    return structure


def parse_omega(doc: Union[SourceDocument, str]) -> InducedFunction:
    doc = _as_doc(doc)
    lines = doc.lines
    if not lines:
        raise ParseError("HEADER_EXPECTED", "empty document, expected 'omega <n>'", source=doc.name)
    head = lines[0]
    if head.tokens[0].text != "omega":
        raise _err(doc, head, head.tokens[0], "HEADER_EXPECTED", "the first directive must be 'omega <n>'")
    _arity(doc, head, 2)
    n = _int(doc, head, head.tokens[1], minimum=1)
    sizes: dict[str, tuple[int, ...]] = {}
    comps: dict[int, tuple[int, ...]] = {}

    for line in lines[1:]:
        kw = line.tokens[0]
        if kw.text in ("out", "in"):
            if kw.text in sizes:
                raise _err(doc, line, kw, f"DUPLICATE_{kw.text.upper()}", f"'{kw.text}' given twice")
            if comps:
                raise _err(doc, line, kw, "ORDER", f"'{kw.text}' must precede the component lines")
            _arity(doc, line, n + 1)
            minimum = 2 if kw.text == "out" else 1
            sizes[kw.text] = tuple(_int(doc, line, t, minimum) for t in line.tokens[1:])
        elif kw.text == "component":
            if "out" not in sizes or "in" not in sizes:
                raise _err(doc, line, kw, "ORDER", "'out' and 'in' must precede the component lines")
            ident, entries = _table(doc, line)
            k = _int(doc, line, ident, minimum=1)
            if k > n:
                raise _err(doc, line, ident, "BAD_PARTY", f"party {k} outside 1..{n}")
            if k in comps:
                raise _err(doc, line, ident, "DUPLICATE_COMPONENT", f"component {k} given twice")
            m = prod(sizes["out"])
            if len(entries) != m:
                bad = entries[m] if len(entries) > m else None
                raise _err(doc, line, bad, "LENGTH_MISMATCH",
                           f"component {k} has {len(entries)} entries, expected {m}")
            values = []
            for t in entries:
                value = _int(doc, line, t)
                if value >= sizes["in"][k - 1]:
                    raise _err(doc, line, t, "ENTRY_RANGE",
                               f"entry {value} outside 0..{sizes['in'][k - 1] - 1}")
                values.append(value)
            comps[k] = tuple(values)
        elif kw.text == "omega":
            raise _err(doc, line, kw, "DUPLICATE_HEADER", "'omega' given twice")
        else:
            raise _err(doc, line, kw, "UNKNOWN_DIRECTIVE", f"unknown directive {kw.text!r}")

    for key in ("out", "in"):
        if key not in sizes:
            raise _err(doc, head, None, "MISSING_SIZES", f"no '{key}' line")
    missing = [k for k in range(1, n + 1) if k not in comps]
    if missing:
        raise _err(doc, head, None, "MISSING_COMPONENT", f"no component line for party {missing[0]}")
    return InducedFunction(sizes["out"], sizes["in"], tuple(comps[k] for k in range(1, n + 1)))


def detect_kind(doc: Union[SourceDocument, str]) -> str:
    """``"omega"`` or ``"structure"`` from the first directive."""
    lines = _as_doc(doc).lines
    return "omega" if lines and lines[0].tokens[0].text == "omega" else "structure"


def parse(doc: Union[SourceDocument, str]):
    doc = _as_doc(doc)
    return parse_omega(doc) if detect_kind(doc) == "omega" else parse_structure(doc)


def load(path):
    """Parse a file, choosing the format from its extension, else its content."""
    doc = SourceDocument.from_path(path)
    suffix = Path(path).suffix
    if suffix == ".omega":
        return parse_omega(doc)
    if suffix == ".cstruct":
        return parse_structure(doc)
    return parse(doc)


def _join(values) -> str:
    return " ".join(str(v) for v in values)


def serialize(obj: Union[CausalStructure, InducedFunction]) -> str:
    if isinstance(obj, InducedFunction):
        out = [f"omega {obj.n}", f"out {_join(obj.out_sizes)}", f"in {_join(obj.in_sizes)}"]
        out += [f"component {k + 1} : {_join(c)}" for k, c in enumerate(obj.components)]
        return "\n".join(out) + "\n"
    out = [f"vertex {v} {obj.alphabets[v]}" for v in sorted(obj.graph.vertices)]
    out += [f"edge {u} {w}" for u, w in sorted(obj.graph.edges)]
    out += [f"party {p}" for p in sorted(obj.parties)]
    out += [f"mech {v} : {_join(m.entries)}" for v, m in sorted(obj.mechanisms.items())]
    return "\n".join(out) + "\n"
