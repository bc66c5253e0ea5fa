"""Pipeline language for procedures and preference specs.

Grammar::

    procedure  := stage ( "|>" stage )* [ "|>" "first" ]
    stage      := "filter" orexpr | "sort" dir IDENT
    dir        := "asc" | "desc"
    orexpr     := andexpr ( "or" andexpr )*
    andexpr    := atom ( "and" atom )*
    atom       := IDENT (">="|"<=") VALUE | "(" orexpr ")"
    VALUE      := decimal literal | quoted label

Stages run left to right. ``first`` alone selects the head of the input and
``<identity>`` names the empty procedure; both exist so that every procedure
has a printed form that parses back.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import FrozenSet, List, Mapping, Optional, Union

from .model import (
    And,
    Atom,
    Direction,
    Filter,
    FilterExpr,
    Number,
    Op,
    Or,
    Ordinal,
    PreferenceSpec,
    Procedure,
    SchemaError,
    Sort,
)

KEYWORDS = frozenset({"filter", "sort", "asc", "desc", "first", "and", "or"})
IDENTITY_TEXT = "<identity>"


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan, expected: FrozenSet[str] = frozenset()):
        self.message = message
        self.span = span
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at bytes {span.start}..{span.end}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, KW, NUM, STR, OP, PIPE, LPAREN, RPAREN, IDENTITY, EOF
    text: str
    start: int
    end: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<IDENTITY><identity>)
  | (?P<PIPE>\|>)
  | (?P<OP>>=|<=)
  | (?P<LPAREN>\()
  | (?P<RPAREN>\))
  | (?P<STR>"(?:[^"\\]|\\.)*")
  | (?P<NUM>[-+]?(?:\d+(?:\.\d*)?|\.\d+))
  | (?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


class _Source:
    """Maps character offsets to UTF-8 byte offsets for error spans."""

    def __init__(self, text: str):
        self.text = text

    def span(self, start: int, end: int) -> SourceSpan:
        head = len(self.text[:start].encode("utf-8"))
        return SourceSpan(head, head + len(self.text[start:end].encode("utf-8")))


def tokenize(text: str) -> List[Token]:
    src = _Source(text)
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", src.span(pos, pos + 1))
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            if kind == "IDENT" and tok in KEYWORDS:
                kind = "KW"
            out.append(Token(kind, tok, m.start(), m.end()))
        pos = m.end()
    out.append(Token("EOF", "", len(text), len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.src = _Source(text)
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, expected=()) -> ParseError:
        t = self.tok
        what = "end of input" if t.kind == "EOF" else repr(t.text)
        return ParseError(f"{message}, found {what}", self.src.span(t.start, t.end), frozenset(expected))

    def at_kw(self, word: str) -> bool:
        return self.tok.kind == "KW" and self.tok.text == word

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect_kw(self, *words: str) -> str:
        if self.tok.kind == "KW" and self.tok.text in words:
            return self.advance().text
        raise self.error(f"expected {' or '.join(repr(w) for w in words)}", words)

    def expect_eof(self):
        if self.tok.kind != "EOF":
            raise self.error("expected end of input", {"|>", "end of input"})

    # procedure := stage ("|>" stage)* ["|>" "first"]
    def procedure(self) -> Procedure:
        if self.tok.kind == "IDENTITY":
            self.advance()
            self.expect_eof()
            return Procedure()
        if self.at_kw("first"):
            self.advance()
            self.expect_eof()
            return Procedure((), take_first=True)
        if self.tok.kind == "EOF":
            raise self.error("expected stage", {"filter", "sort"})
        stages = [self.stage()]
        take_first = False
        while self.tok.kind == "PIPE":
            self.advance()
            if self.at_kw("first"):
                self.advance()
                take_first = True
                if self.tok.kind != "EOF":
                    raise self.error("'first' may only appear as the final stage", {"end of input"})
                break
            stages.append(self.stage())
        self.expect_eof()
        return Procedure(tuple(stages), take_first)

    def stage(self):
        word = self.expect_kw("filter", "sort")
        if word == "filter":
            return Filter(self.orexpr())
        direction = self.expect_kw("asc", "desc")
        if self.tok.kind != "IDENT":
            raise self.error("expected attribute name", {"IDENT"})
        return Sort(Direction(direction), self.advance().text)

    def orexpr(self) -> FilterExpr:
        parts = [self.andexpr()]
        while self.at_kw("or"):
            self.advance()
            parts.append(self.andexpr())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def andexpr(self) -> FilterExpr:
        parts = [self.atom()]
        while self.at_kw("and"):
            self.advance()
            parts.append(self.atom())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def atom(self) -> FilterExpr:
        if self.tok.kind == "LPAREN":
            self.advance()
            inner = self.orexpr()
            if self.tok.kind != "RPAREN":
                raise self.error("expected ')'", {")", "and", "or"})
            self.advance()
            return inner
        if self.tok.kind != "IDENT":
            raise self.error("expected predicate", {"IDENT", "("})
        attr = self.advance().text
        if self.tok.kind != "OP":
            raise self.error("expected comparison", {">=", "<="})
        op = Op(self.advance().text)
        return Atom(attr, op, self.value())

    def value(self):
        t = self.tok
        if t.kind == "NUM":
            self.advance()
            return Number(t.text)
        if t.kind == "STR":
            self.advance()
            try:
                label = json.loads(t.text)
            except ValueError:
                raise ParseError("malformed label literal", self.src.span(t.start, t.end)) from None
            return Ordinal(label)
        raise self.error("expected value", {"decimal literal", "quoted label"})


def parse_procedure(text: str) -> Procedure:
    return _Parser(text).procedure()


def parse_filter(text: str) -> FilterExpr:
    p = _Parser(text)
    if p.tok.kind == "EOF":
        raise p.error("expected predicate", {"IDENT", "("})
    expr = p.orexpr()
    p.expect_eof()
    return expr


# --------------------------------------------------------------------------
# Printing
# --------------------------------------------------------------------------


def format_value(v) -> str:
    if isinstance(v, Number):
        return str(v.value)
    return json.dumps(v.label)


def format_filter(expr: FilterExpr, inside_and: bool = False) -> str:
    if isinstance(expr, Atom):
        return f"{expr.attr} {expr.op.value} {format_value(expr.bound)}"
    if isinstance(expr, Or):
        return "(" + " or ".join(format_filter(c) for c in expr.children) + ")"
    body = " and ".join(format_filter(c, inside_and=True) for c in expr.children)
    return f"({body})" if inside_and else body


def print_stage(stage) -> str:
    if isinstance(stage, Sort):
        return f"sort {stage.direction.value} {stage.attr}"
    return "filter " + format_filter(stage.pred)


def print_procedure(p: Procedure) -> str:
    """Canonical text; the identity procedure prints as the empty string."""
    parts = [print_stage(s) for s in p.stages]
    if p.take_first:
        parts.append("first")
    return " |> ".join(parts)


def display_procedure(p: Procedure) -> str:
    """Like :func:`print_procedure` but shows ``<identity>`` for no stages."""
    return print_procedure(p) or IDENTITY_TEXT


# --------------------------------------------------------------------------
# Preference specs
# --------------------------------------------------------------------------


def parse_preference_spec(doc: Union[str, Mapping]) -> PreferenceSpec:
    """Read ``{"property": "<orexpr>" | null, "ordering": [{"dir", "attr"}, ...]}``."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except ValueError as exc:
            raise SchemaError(f"spec is not valid JSON: {exc}") from None
    if not isinstance(doc, Mapping):
        raise SchemaError("spec document must be an object")
    unknown = set(doc) - {"property", "ordering"}
    if unknown:
        raise SchemaError(f"unknown spec fields: {sorted(unknown)}")
    text = doc.get("property")
    if text is None or (isinstance(text, str) and not text.strip()):
        prop: Optional[FilterExpr] = None
    elif isinstance(text, str):
        prop = parse_filter(text)
    else:
        raise SchemaError("'property' must be a string or null")
    ordering = []
    for entry in doc.get("ordering", []):
        if not isinstance(entry, Mapping) or set(entry) != {"dir", "attr"}:
            raise SchemaError(f"ordering entries need exactly 'dir' and 'attr': {entry!r}")
        if entry["dir"] not in ("asc", "desc"):
            raise SchemaError(f"unknown direction {entry['dir']!r}")
        ordering.append((Direction(entry["dir"]), entry["attr"]))
    return PreferenceSpec(prop, tuple(ordering))


def spec_to_doc(spec: PreferenceSpec) -> dict:
    return {
        "property": None if spec.prop is None else format_filter(spec.prop),
        "ordering": [{"dir": d.value, "attr": a} for d, a in spec.ordering],
    }
