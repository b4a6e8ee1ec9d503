"""Text formats: the ``.pn`` net language, marking literals, property files, DOT.

Net files look like::

    net fig1 {
      places { p0 = 2; p1 = 3; p2; }
      transitions { t0; }
      arcs {
        p0 -> t0;
        p1 -3-> t0;     # weight 3
        t0 -2-> p2;
        p1 ..> t0;      # read arc (place to transition only), weight 1
        p1 ..2..> t0;   # weighted read arc
      }
    }

``#`` starts a comment. Arc direction decides input vs output.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .errors import NetStructureError, ParseError, UnknownNodeError
from .net import INPUT, OUTPUT, READ, Arc, Marking, Net

IDENT_RE = r"[A-Za-z_][A-Za-z0-9_']*"

_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>{IDENT_RE})
  | (?P<nat>[0-9]+)
  | (?P<op>\.\.>|\.\.|->|-|=|;|\{{|\}}|,)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, nat, op, eof
    text: str
    line: int
    column: int


def tokenize(text: str) -> Iterator[Token]:
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        mo = _TOKEN_RE.match(text, pos)
        if mo is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = mo.lastgroup
        if kind not in ("ws", "comment"):
            yield Token(kind, mo.group(), line, pos - line_start + 1)
        chunk = mo.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = mo.end()
    yield Token("eof", "", line, pos - line_start + 1)


class _Cursor:
    def __init__(self, text: str):
        self.tokens = list(tokenize(text))
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.column)

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def expect_op(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def expect(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {what}, found {found!r}")
        return self.advance()

    def keyword(self, word: str) -> None:
        if self.tok.kind != "ident" or self.tok.text != word:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {word!r}, found {found!r}")
        self.advance()

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != "eof":
            self.i += 1
        return tok


def _nat(cur: _Cursor, positive: bool, what: str) -> int:
    tok = cur.expect("nat", what)
    value = int(tok.text)
    if positive and value < 1:
        raise cur.error(f"{what} must be at least 1", tok)
    return value


def parse_net(text: str) -> Net:
    """Parse net text. Errors carry a line and column.

    The ``net NAME { ... }`` wrapper may be omitted, in which case the
    net is named ``net``.
    """
    cur = _Cursor(text)
    name = "net"
    wrapped = cur.tok.kind == "ident" and cur.tok.text == "net"
    if wrapped:
        cur.advance()
        name = cur.expect("ident", "net name").text
        cur.expect_op("{")

    places: list[str] = []
    initial: list[int] = []
    kinds: dict[str, str] = {}

    def declare(tok: Token, kind: str) -> None:
        if tok.text in kinds:
            raise cur.error(f"duplicate name {tok.text!r} (already a {kinds[tok.text]})", tok)
        kinds[tok.text] = kind

    cur.keyword("places")
    cur.expect_op("{")
    while not cur.at("}"):
        tok = cur.expect("ident", "place name")
        declare(tok, "place")
        count = 0
        if cur.at("="):
            cur.advance()
            count = _nat(cur, False, "token count")
        cur.expect_op(";")
        places.append(tok.text)
        initial.append(count)
    cur.advance()

    transitions: list[str] = []
    cur.keyword("transitions")
    cur.expect_op("{")
    while not cur.at("}"):
        tok = cur.expect("ident", "transition name")
        declare(tok, "transition")
        cur.expect_op(";")
        transitions.append(tok.text)
    cur.advance()

    pidx = {p: i for i, p in enumerate(places)}
    tidx = {t: i for i, t in enumerate(transitions)}
    arcs: list[Arc] = []
    seen: dict[tuple[int, int, str], Token] = {}
    cur.keyword("arcs")
    cur.expect_op("{")
    while not cur.at("}"):
        src = cur.expect("ident", "arc source")
        weight, read = 1, False
        if cur.at("->"):
            cur.advance()
        elif cur.at("-"):
            cur.advance()
            weight = _nat(cur, True, "arc weight")
            cur.expect_op("->")
        elif cur.at("..>"):
            cur.advance()
            read = True
        elif cur.at(".."):
            cur.advance()
            weight = _nat(cur, True, "read arc weight")
            cur.expect_op("..>")
            read = True
        else:
            raise cur.error(f"expected an arc operator after {src.text!r}")
        dst = cur.expect("ident", "arc target")
        cur.expect_op(";")
        for tok in (src, dst):
            if tok.text not in kinds:
                raise cur.error(f"unknown name {tok.text!r}", tok)
        if kinds[src.text] == "place" and kinds[dst.text] == "transition":
            arc = Arc(tidx[dst.text], READ if read else INPUT, pidx[src.text], weight)
        elif kinds[src.text] == "transition" and kinds[dst.text] == "place" and not read:
            arc = Arc(tidx[src.text], OUTPUT, pidx[dst.text], weight)
        elif read:
            raise cur.error("read arcs must go from a place to a transition", src)
        else:
            raise cur.error(f"arc {src.text!r} -> {dst.text!r} must join a place and a transition", src)
        key = (arc.place, arc.transition, arc.kind)
        if key in seen:
            raise cur.error(f"duplicate {arc.kind} arc {src.text!r} -> {dst.text!r}", src)
        other = {INPUT: READ, READ: INPUT}.get(arc.kind)
        if other and (arc.place, arc.transition, other) in seen:
            raise cur.error(f"{src.text!r} has both an input arc and a read arc to {dst.text!r}", src)
        seen[key] = src
        arcs.append(arc)
    cur.advance()

    if wrapped:
        cur.expect_op("}")
    if cur.tok.kind != "eof":
        raise cur.error(f"unexpected trailing input {cur.tok.text!r}")
    try:
        return Net(tuple(places), tuple(transitions), tuple(arcs), Marking(initial), name)
    except NetStructureError as e:  # pragma: no cover - parser validates first
        raise ParseError(str(e)) from e


def serialize_net(net: Net) -> str:
    """Canonical net text; ``parse_net`` of the result equals ``net``."""
    out = [f"net {net.name} {{", "  places {"]
    for p, c in zip(net.places, net.initial_marking):
        out.append(f"    {p} = {c};" if c else f"    {p};")
    out += ["  }", "  transitions {"]
    out += [f"    {t};" for t in net.transitions]
    out += ["  }", "  arcs {"]
    for a in net.arcs:
        p, t = net.places[a.place], net.transitions[a.transition]
        if a.kind == INPUT:
            op = "->" if a.weight == 1 else f"-{a.weight}->"
            out.append(f"    {p} {op} {t};")
        elif a.kind == READ:
            op = "..>" if a.weight == 1 else f"..{a.weight}..>"
            out.append(f"    {p} {op} {t};")
        else:
            op = "->" if a.weight == 1 else f"-{a.weight}->"
            out.append(f"    {t} {op} {p};")
    out += ["  }", "}"]
    return "\n".join(out) + "\n"


def parse_marking(text: str, net: Net) -> Marking:
    """Parse ``{2 p0, 3 p1}`` against ``net``'s places.

    >>> from pnverify.net import Net
    >>> parse_marking("{2 p0, p2}", Net.build(["p0", "p1", "p2"], []))
    Marking((2, 0, 1))
    """
    cur = _Cursor(text)
    cur.expect_op("{")
    counts = [0] * len(net.places)
    seen: set[str] = set()
    if not cur.at("}"):
        while True:
            count = 1
            if cur.tok.kind == "nat":
                count = _nat(cur, True, "token count")
            tok = cur.expect("ident", "place name")
            try:
                idx = net.place_index(tok.text)
            except UnknownNodeError:
                raise cur.error(f"unknown place {tok.text!r}", tok) from None
            if tok.text in seen:
                raise cur.error(f"place {tok.text!r} listed twice", tok)
            seen.add(tok.text)
            counts[idx] = count
            if cur.at(","):
                cur.advance()
                continue
            break
    cur.expect_op("}")
    if cur.tok.kind != "eof":
        raise cur.error(f"unexpected trailing input {cur.tok.text!r}")
    return Marking(counts)


def format_marking(m, net: Net) -> str:
    """Brace notation, place order, count 1 elided, zeros omitted."""
    parts = []
    for p, c in zip(net.places, m):
        if c == 1:
            parts.append(p)
        elif c:
            parts.append(f"{c} {p}")
    return "{" + ", ".join(parts) + "}"


def parse_property_file(text: str) -> list[tuple[str, str]]:
    """Split a property file into ``(name, formula_text)`` pairs.

    One ``NAME : FORMULA`` per line; blank lines and ``#`` comments are
    skipped. Formulas are not parsed here.
    """
    props: list[tuple[str, str]] = []
    names: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, formula = line.partition(":")
        name = name.strip()
        if not sep or not re.fullmatch(IDENT_RE, name):
            raise ParseError("expected 'NAME : FORMULA'", lineno, 1)
        if not formula.strip():
            raise ParseError(f"property {name!r} has no formula", lineno, len(raw))
        if name in names:
            raise ParseError(f"duplicate property name {name!r}", lineno, 1)
        names.add(name)
        props.append((name, formula.strip()))
    return props


def format_property_file(props) -> str:
    return "".join(f"{name} : {formula}\n" for name, formula in props)


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(net: Net, m=None) -> str:
    """Graphviz rendering of ``net`` at marking ``m`` (default: initial).

    Places are circles labelled with their token count, transitions are
    boxes, read arcs are dashed with a dot at the place end.
    """
    m = net.initial_marking if m is None else m
    lines = [f"digraph {_q(net.name)} {{", "  rankdir=LR;"]
    for p, c in zip(net.places, m):
        label = _q(p)[:-1] + f'\\n{c}"' if c else _q(p)
        lines.append(f'  {_q("p:" + p)} [shape=circle, label={label}];')
    for t in net.transitions:
        lines.append(f'  {_q("t:" + t)} [shape=box, label={_q(t)}];')
    for a in net.arcs:
        p, t = _q("p:" + net.places[a.place]), _q("t:" + net.transitions[a.transition])
        attrs = []
        if a.weight > 1:
            attrs.append(f'label="{a.weight}"')
        if a.kind == OUTPUT:
            src, dst = t, p
        else:
            src, dst = p, t
        if a.kind == READ:
            attrs += ["style=dashed", "dir=both", "arrowhead=none", "arrowtail=dot"]
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {src} -> {dst}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"
