"""CTL over reachability graphs.

Formula syntax::

    tokens(p) >= 2    enabled(t)    deadlock    true    false
    !f   f & g   f | g   f -> g          (precedence: ! > & > | > ->)
    EX f  EF f  EG f  AX f  AF f  AG f   E[f U g]   A[f U g]

Paths are maximal: they are infinite or end in a deadlock state. A deadlock
state has no successors, so ``EX f`` is false there and ``AX f`` vacuously
true; ``EG f`` holds at a deadlock state satisfying ``f`` and ``AF f`` fails
at a deadlock state violating ``f``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .errors import ParseError, TruncatedError
from .net import Net, is_enabled
from .statespace import ReachabilityGraph, _bfs_path

COMPARATORS = ("<=", ">=", "<", ">", "=")
UNARY_TEMPORAL = ("EX", "EF", "EG", "AX", "AF", "AG")
UNIVERSAL = ("AX", "AF", "AG", "AU")


class Formula:
    """Base class of formula nodes. ``str(f)`` parses back to an equal formula."""

    def children(self) -> tuple["Formula", ...]:
        return ()

    def walk(self) -> Iterator["Formula"]:
        yield self
        for c in self.children():
            yield from c.walk()

    def is_state_formula(self) -> bool:
        """True when no temporal operator occurs."""
        return not any(isinstance(n, (Unary, Until)) for n in self.walk())


@dataclass(frozen=True)
class Const(Formula):
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Deadlock(Formula):
    def __str__(self):
        return "deadlock"


@dataclass(frozen=True)
class Tokens(Formula):
    place: str
    op: str
    bound: int

    def __str__(self):
        return f"tokens({self.place}) {self.op} {self.bound}"

    def test(self, count: int) -> bool:
        n = self.bound
        return {
            "<": count < n,
            "<=": count <= n,
            "=": count == n,
            ">=": count >= n,
            ">": count > n,
        }[self.op]


@dataclass(frozen=True)
class Enabled(Formula):
    transition: str

    def __str__(self):
        return f"enabled({self.transition})"


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"!{_wrap(self.arg)}"


@dataclass(frozen=True)
class Binary(Formula):
    op: str  # "&", "|", "->"
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        mine = _PREC[self.op]
        left, right = str(self.left), str(self.right)
        # & and | associate left, -> associates right
        if _prec(self.left) < mine or (self.op == "->" and _prec(self.left) == mine):
            left = f"({left})"
        if _prec(self.right) < mine or (self.op != "->" and _prec(self.right) == mine):
            right = f"({right})"
        return f"{left} {self.op} {right}"


@dataclass(frozen=True)
class Unary(Formula):
    op: str  # one of UNARY_TEMPORAL
    arg: Formula

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"{self.op} {_wrap(self.arg)}"


@dataclass(frozen=True)
class Until(Formula):
    quantifier: str  # "E" or "A"
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"{self.quantifier}[{self.left} U {self.right}]"


_PREC = {"->": 1, "|": 2, "&": 3}


def _prec(f: Formula) -> int:
    return _PREC[f.op] if isinstance(f, Binary) else 4


def _wrap(f: Formula) -> str:
    return f"({f})" if isinstance(f, Binary) else str(f)


def And(a, b):
    return Binary("&", a, b)


def Or(a, b):
    return Binary("|", a, b)


def Implies(a, b):
    return Binary("->", a, b)


def EX(f):
    return Unary("EX", f)


def EF(f):
    return Unary("EF", f)


def EG(f):
    return Unary("EG", f)


def AX(f):
    return Unary("AX", f)


def AF(f):
    return Unary("AF", f)


def AG(f):
    return Unary("AG", f)


TRUE = Const(True)
FALSE = Const(False)


# -- parser -------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<nat>[0-9]+)"
    r"|(?P<op>->|<=|>=|<|>|=|!|&|\||\(|\)|\[|\])"
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            mo = _TOKEN_RE.match(text, pos)
            if mo is None:
                raise ParseError(f"unexpected character {text[pos]!r}", 1, pos + 1)
            if mo.lastgroup != "ws":
                self.toks.append((mo.lastgroup, mo.group(), pos + 1))
            pos = mo.end()
        self.toks.append(("eof", "", len(text) + 1))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def error(self, msg):
        return ParseError(msg, 1, self.peek()[2])

    def next(self):
        tok = self.toks[self.i]
        if tok[0] != "eof":
            self.i += 1
        return tok

    def accept(self, text) -> bool:
        kind, val, _ = self.peek()
        if kind in ("op", "ident") and val == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.peek()[1] or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def parse(self) -> Formula:
        f = self.implies()
        if self.peek()[0] != "eof":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def implies(self):
        left = self.disj()
        if self.accept("->"):
            return Binary("->", left, self.implies())
        return left

    def disj(self):
        f = self.conj()
        while self.accept("|"):
            f = Binary("|", f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.accept("&"):
            f = Binary("&", f, self.unary())
        return f

    def unary(self):
        if self.accept("!"):
            return Not(self.unary())
        kind, val, _ = self.peek()
        if kind == "ident" and val in UNARY_TEMPORAL:
            self.next()
            return Unary(val, self.unary())
        return self.primary()

    def name(self, what):
        kind, val, _ = self.peek()
        if kind != "ident":
            raise self.error(f"expected {what} name")
        self.next()
        return val

    def primary(self):
        kind, val, _ = self.peek()
        if self.accept("("):
            f = self.implies()
            self.expect(")")
            return f
        if kind != "ident":
            raise self.error(f"expected a formula, found {val or 'end of input'!r}")
        self.next()
        if val == "true":
            return TRUE
        if val == "false":
            return FALSE
        if val == "deadlock":
            return Deadlock()
        if val == "tokens":
            self.expect("(")
            place = self.name("place")
            self.expect(")")
            op = self.peek()[1]
            if op not in COMPARATORS:
                raise self.error("expected a comparison (<, <=, =, >=, >)")
            self.next()
            if self.peek()[0] != "nat":
                raise self.error("expected a natural number")
            return Tokens(place, op, int(self.next()[1]))
        if val == "enabled":
            self.expect("(")
            t = self.name("transition")
            self.expect(")")
            return Enabled(t)
        if val in ("E", "A"):
            self.expect("[")
            left = self.implies()
            self.expect("U")
            right = self.implies()
            self.expect("]")
            return Until(val, left, right)
        self.i -= 1
        raise self.error(f"unknown keyword {val!r}")


def parse_formula(text: str) -> Formula:
    """Parse a CTL formula; names are resolved later, against a net."""
    return _Parser(text).parse()


# -- checking -----------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of checking a formula at the initial state.

    ``trace`` is a firing sequence from the initial marking: a witness when a
    top-level existential formula holds, a counterexample when a top-level
    universal formula fails, otherwise ``None``. ``satisfying`` holds the
    indices of all states satisfying the formula when requested.
    """

    holds: bool
    trace: tuple[str, ...] | None = None
    trace_kind: str | None = None  # "witness" or "counterexample"
    satisfying: frozenset[int] | None = None

    def __bool__(self):
        return self.holds


def resolve(net: Net, f: Formula) -> None:
    """Raise :class:`UnknownNodeError` for names missing from ``net``."""
    for node in f.walk():
        if isinstance(node, Tokens):
            net.place_index(node.place)
        elif isinstance(node, Enabled):
            net.transition_index(node.transition)


def holds_at(net: Net, m, f: Formula) -> bool:
    """Evaluate a state formula (no temporal operators) on one marking."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Tokens):
        return f.test(m[net.place_index(f.place)])
    if isinstance(f, Enabled):
        return is_enabled(net, m, f.transition)
    if isinstance(f, Deadlock):
        return not any(is_enabled(net, m, t) for t in range(len(net.transitions)))
    if isinstance(f, Not):
        return not holds_at(net, m, f.arg)
    if isinstance(f, Binary):
        a = holds_at(net, m, f.left)
        if f.op == "&":
            return a and holds_at(net, m, f.right)
        if f.op == "|":
            return a or holds_at(net, m, f.right)
        return not a or holds_at(net, m, f.right)
    raise ValueError(f"{f} is not a state formula")


class _Labeler:
    def __init__(self, net: Net, g: ReachabilityGraph):
        self.net = net
        self.g = g
        self.n = len(g.states)
        self.all = frozenset(range(self.n))
        self.pred = g.predecessors()
        self.terminal = frozenset(s for s in range(self.n) if not g.succ[s])
        self.cache: dict[Formula, frozenset[int]] = {}

    def sat(self, f: Formula) -> frozenset[int]:
        got = self.cache.get(f)
        if got is None:
            got = self.cache[f] = frozenset(self._sat(f))
        return got

    def _sat(self, f: Formula):
        states = self.g.states
        if isinstance(f, Const):
            return self.all if f.value else ()
        if isinstance(f, Deadlock):
            return {s for s in range(self.n) if not any(is_enabled(self.net, states[s], t) for t in range(len(self.net.transitions)))}
        if isinstance(f, Tokens):
            p = self.net.place_index(f.place)
            return {s for s in range(self.n) if f.test(states[s][p])}
        if isinstance(f, Enabled):
            t = self.net.transition_index(f.transition)
            return {s for s in range(self.n) if is_enabled(self.net, states[s], t)}
        if isinstance(f, Not):
            return self.all - self.sat(f.arg)
        if isinstance(f, Binary):
            a, b = self.sat(f.left), self.sat(f.right)
            if f.op == "&":
                return a & b
            if f.op == "|":
                return a | b
            return (self.all - a) | b
        if isinstance(f, Unary):
            a = self.sat(f.arg)
            op = f.op
            if op == "EX":
                return {s for s in range(self.n) if any(d in a for _, d in self.g.succ[s])}
            if op == "AX":
                return {s for s in range(self.n) if all(d in a for _, d in self.g.succ[s])}
            if op == "EF":
                return self._eu(self.all, a)
            if op == "AG":
                return self.all - self._eu(self.all, self.all - a)
            if op == "EG":
                return self._eg(a)
            if op == "AF":
                return self._au(self.all, a)
        if isinstance(f, Until):
            a, b = self.sat(f.left), self.sat(f.right)
            return self._eu(a, b) if f.quantifier == "E" else self._au(a, b)
        raise TypeError(f"not a formula: {f!r}")

    def _eu(self, a, b):
        z = set(b)
        queue = deque(z)
        while queue:
            d = queue.popleft()
            for _, s in self.pred[d]:
                if s not in z and s in a:
                    z.add(s)
                    queue.append(s)
        return z

    def _au(self, a, b):
        # remaining[s] counts successor edges not yet known to lead into z
        remaining = [len(self.g.succ[s]) for s in range(self.n)]
        z = set(b)
        queue = deque(z)
        while queue:
            d = queue.popleft()
            for _, s in self.pred[d]:
                remaining[s] -= 1
                if remaining[s] == 0 and s not in z and s in a:
                    z.add(s)
                    queue.append(s)
        return z

    def _eg(self, a):
        # largest z within a where every state is terminal or has a successor in z
        z = set(a)
        inside = [sum(1 for _, d in self.g.succ[s] if d in z) for s in range(self.n)]
        queue = deque(s for s in z if inside[s] == 0 and s not in self.terminal)
        while queue:
            s = queue.popleft()
            if s not in z:
                continue
            z.discard(s)
            for _, p in self.pred[s]:
                if p in z:
                    inside[p] -= 1
                    if inside[p] == 0 and p not in self.terminal:
                        queue.append(p)
        return z

    # -- traces ---------------------------------------------------------------

    def names(self, path):
        return tuple(self.net.transitions[t] for t in path)

    def reach_path(self, through, goal):
        return _bfs_path(self.g, set(through), lambda s: s in goal)

    def eg_path(self, z, start=0):
        """Follow first successors inside ``z`` until a deadlock or a repeat."""
        path, seen, s = [], {start}, start
        while True:
            nxt = next(((t, d) for t, d in self.g.succ[s] if d in z), None)
            if nxt is None:
                return path
            path.append(nxt[0])
            s = nxt[1]
            if s in seen:
                return path
            seen.add(s)

    def end_state(self, path):
        s = 0
        for t in path:
            s = next(d for tt, d in self.g.succ[s] if tt == t)
        return s

    def witness(self, f: Formula):
        """Trace for a formula that holds at state 0, when it has one."""
        if isinstance(f, Unary):
            a = self.sat(f.arg)
            if f.op == "EF":
                return self.reach_path(self.all, a)
            if f.op == "EX":
                return next([t] for t, d in self.g.succ[0] if d in a)
            if f.op == "EG":
                return self.eg_path(self.sat(f))
        if isinstance(f, Until) and f.quantifier == "E":
            return self.reach_path(self.sat(f.left), self.sat(f.right))
        return None

    def counterexample(self, f: Formula):
        """Trace refuting a universal formula that fails at state 0."""
        if isinstance(f, Unary):
            a = self.sat(f.arg)
            if f.op == "AG":
                path = self.reach_path(self.all, self.all - a)
                if isinstance(f.arg, Unary) and f.arg.op == "EF":
                    # nothing reachable from the bad state satisfies the EF
                    # target, so run on to show a whole maximal path
                    end = self.end_state(path)
                    path = path + self.eg_path(self.all - a, end)
                return path
            if f.op == "AX":
                return next([t] for t, d in self.g.succ[0] if d not in a)
            if f.op == "AF":
                return self.eg_path(self._eg(self.all - a))
        if isinstance(f, Until) and f.quantifier == "A":
            a, b = self.sat(f.left), self.sat(f.right)
            bad = (self.all - a) - b
            reach_bad = self._eu(self.all - b, bad)
            if 0 in reach_bad:
                return self.reach_path(self.all - b, bad)
            return self.eg_path(self._eg(self.all - b))
        return None


def _is_universal(f: Formula) -> bool:
    return (isinstance(f, Unary) and f.op in UNIVERSAL) or (isinstance(f, Until) and f.quantifier == "A")


def check(net: Net, g: ReachabilityGraph, f: Formula | str, labels: bool = False) -> Verdict:
    """Evaluate ``f`` at the initial state of ``g``.

    On a truncated graph only ``EF`` of a state formula (or a plain state
    formula) can be answered, and ``EF`` only when a witness was found.
    """
    if isinstance(f, str):
        f = parse_formula(f)
    resolve(net, f)
    if not g.complete:
        return _check_truncated(net, g, f)
    lab = _Labeler(net, g)
    sat = lab.sat(f)
    holds = 0 in sat
    trace = kind = None
    if holds:
        path = lab.witness(f)
        if path is not None:
            trace, kind = lab.names(path), "witness"
    elif _is_universal(f):
        path = lab.counterexample(f)
        if path is not None:
            trace, kind = lab.names(path), "counterexample"
    return Verdict(holds, trace, kind, sat if labels else None)


def _check_truncated(net: Net, g: ReachabilityGraph, f: Formula) -> Verdict:
    lab = _Labeler(net, g)
    if f.is_state_formula():
        return Verdict(0 in lab.sat(f))
    if isinstance(f, Unary) and f.op == "EF" and f.arg.is_state_formula():
        path = lab.reach_path(lab.all, lab.sat(f.arg))
        if path is not None:
            return Verdict(True, lab.names(path), "witness")
        raise TruncatedError(
            f"no witness for {f} within {g.limit} states; the state space is truncated, raise the limit"
        )
    raise TruncatedError(f"cannot decide {f} on a truncated state space; raise the limit")


def check_liveness_query(net: Net, g: ReachabilityGraph, t: str) -> Verdict:
    """``AG EF enabled(t)``: ``t`` can always become enabled again."""
    return check(net, g, AG(EF(Enabled(net.transitions[net.transition_index(t)]))))
