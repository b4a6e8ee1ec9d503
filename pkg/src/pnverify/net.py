"""Place/transition nets with weighted arcs and read arcs.

A :class:`Net` is immutable. Places and transitions are identified by dense
indices and unique names; every public function accepts either. Markings are
plain tuples of token counts (see :class:`Marking`), so they hash, compare and
sort like tuples.

Enabling: ``t`` is enabled at ``m`` iff ``m(p) >= W(p, t)`` for every place
with an input or read arc to ``t``. Firing: ``m'(p) = m(p) - W(p, t) + W(t, p)``
where read arcs contribute nothing to the update.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .errors import NetStructureError, NotEnabledError, UnknownNodeError

INPUT = "input"
OUTPUT = "output"
READ = "read"
ARC_KINDS = (INPUT, READ, OUTPUT)

NodeRef = Union[int, str]


class Marking(tuple):
    """Token counts indexed by place index. Absent places hold zero tokens."""

    __slots__ = ()

    def __new__(cls, counts: Iterable[int] = ()):
        counts = tuple(counts)
        for c in counts:
            if not isinstance(c, int) or c < 0:
                raise NetStructureError(f"token counts must be nonnegative integers, got {c!r}")
        return super().__new__(cls, counts)

    def __repr__(self):
        return f"Marking({tuple(self)!r})"

    def covers(self, other: Sequence[int]) -> bool:
        """Pointwise ``self >= other``."""
        return all(a >= b for a, b in zip(self, other))

    def total(self) -> int:
        return sum(self)


@dataclass(frozen=True, order=True)
class Arc:
    """One arc between a place and a transition.

    ``kind`` is ``"input"`` (place to transition, consuming), ``"output"``
    (transition to place) or ``"read"`` (place to transition, not consuming).
    """

    transition: int
    kind: str
    place: int
    weight: int = 1

    def __post_init__(self):
        if self.kind not in ARC_KINDS:
            raise NetStructureError(f"unknown arc kind {self.kind!r}")
        if not isinstance(self.weight, int) or self.weight < 1:
            raise NetStructureError(f"arc weight must be a positive integer, got {self.weight!r}")


_KIND_ORDER = {INPUT: 0, READ: 1, OUTPUT: 2}


@dataclass(frozen=True)
class Net:
    """An immutable Petri net ``(P, T, F, W, R, m0)``.

    Arcs are stored in canonical order (by transition, then input/read/output,
    then place), so two nets with the same structure compare equal.
    """

    places: tuple[str, ...]
    transitions: tuple[str, ...]
    arcs: tuple[Arc, ...]
    initial_marking: Marking
    name: str = "net"
    _place_index: Mapping[str, int] = field(init=False, repr=False, compare=False)
    _transition_index: Mapping[str, int] = field(init=False, repr=False, compare=False)
    # per transition: ((place, weight), ...) for consumed, read, produced tokens
    consume: tuple = field(init=False, repr=False, compare=False)
    reads: tuple = field(init=False, repr=False, compare=False)
    produce: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        places = tuple(self.places)
        transitions = tuple(self.transitions)
        set_ = lambda attr, value: object.__setattr__(self, attr, value)  # noqa: E731
        set_("places", places)
        set_("transitions", transitions)

        for kind, names in (("place", places), ("transition", transitions)):
            seen = set()
            for n in names:
                if not isinstance(n, str) or not n:
                    raise NetStructureError(f"{kind} names must be nonempty strings, got {n!r}")
                if n in seen:
                    raise NetStructureError(f"duplicate {kind} name {n!r}")
                seen.add(n)
        clash = set(places) & set(transitions)
        if clash:
            raise NetStructureError(f"names used for both a place and a transition: {sorted(clash)}")

        arcs = sorted(self.arcs, key=lambda a: (a.transition, _KIND_ORDER[a.kind], a.place))
        keys = set()
        for a in arcs:
            if not 0 <= a.place < len(places):
                raise NetStructureError(f"arc references unknown place index {a.place}")
            if not 0 <= a.transition < len(transitions):
                raise NetStructureError(f"arc references unknown transition index {a.transition}")
            key = (a.place, a.transition, a.kind)
            if key in keys:
                raise NetStructureError(
                    f"duplicate {a.kind} arc between {places[a.place]!r} and {transitions[a.transition]!r}"
                )
            keys.add(key)
        for p, t, kind in keys:
            if kind == READ and (p, t, INPUT) in keys:
                raise NetStructureError(
                    f"place {places[p]!r} has both an input arc and a read arc to {transitions[t]!r}"
                )
        set_("arcs", tuple(arcs))

        m0 = self.initial_marking
        if not isinstance(m0, Marking):
            m0 = Marking(m0)
        if len(m0) != len(places):
            raise NetStructureError(
                f"initial marking has {len(m0)} entries for {len(places)} places"
            )
        set_("initial_marking", m0)

        set_("_place_index", {n: i for i, n in enumerate(places)})
        set_("_transition_index", {n: i for i, n in enumerate(transitions)})
        consume = [[] for _ in transitions]
        reads = [[] for _ in transitions]
        produce = [[] for _ in transitions]
        for a in arcs:
            {INPUT: consume, READ: reads, OUTPUT: produce}[a.kind][a.transition].append((a.place, a.weight))
        set_("consume", tuple(tuple(x) for x in consume))
        set_("reads", tuple(tuple(x) for x in reads))
        set_("produce", tuple(tuple(x) for x in produce))

    # -- construction helpers -------------------------------------------

    @classmethod
    def build(
        cls,
        places: Mapping[str, int] | Sequence[str],
        transitions: Sequence[str],
        arcs: Iterable[tuple] = (),
        reads: Iterable[tuple] = (),
        name: str = "net",
    ) -> "Net":
        """Build a net from names.

        ``places`` maps names to initial token counts (or is a plain list of
        names, all empty). ``arcs`` holds ``(source, target)`` or
        ``(source, target, weight)`` tuples; direction decides input vs
        output. ``reads`` holds ``(place, transition[, weight])`` tuples.

        >>> n = Net.build({"p0": 2, "p1": 3, "p2": 0}, ["t0"],
        ...               [("p0", "t0"), ("p1", "t0", 3), ("t0", "p2", 2)])
        >>> fire(n, n.initial_marking, "t0")
        Marking((1, 0, 2))
        """
        if isinstance(places, Mapping):
            names = list(places)
            m0 = [places[p] for p in names]
        else:
            names = list(places)
            m0 = [0] * len(names)
        pidx = {n: i for i, n in enumerate(names)}
        tidx = {n: i for i, n in enumerate(transitions)}
        built = []
        for arc in arcs:
            src, dst, *rest = arc
            w = rest[0] if rest else 1
            if src in pidx and dst in tidx:
                built.append(Arc(tidx[dst], INPUT, pidx[src], w))
            elif src in tidx and dst in pidx:
                built.append(Arc(tidx[src], OUTPUT, pidx[dst], w))
            else:
                raise NetStructureError(f"arc {src!r} -> {dst!r} must join a place and a transition")
        for arc in reads:
            p, t, *rest = arc
            if p not in pidx or t not in tidx:
                raise NetStructureError(f"read arc {p!r} ..> {t!r} must go from a place to a transition")
            built.append(Arc(tidx[t], READ, pidx[p], rest[0] if rest else 1))
        return cls(tuple(names), tuple(transitions), tuple(built), Marking(m0), name)

    # -- lookups ----------------------------------------------------------

    def place_index(self, p: NodeRef) -> int:
        if isinstance(p, int) and not isinstance(p, bool):
            if 0 <= p < len(self.places):
                return p
        elif p in self._place_index:
            return self._place_index[p]
        raise UnknownNodeError(f"unknown place {p!r}")

    def transition_index(self, t: NodeRef) -> int:
        if isinstance(t, int) and not isinstance(t, bool):
            if 0 <= t < len(self.transitions):
                return t
        elif t in self._transition_index:
            return self._transition_index[t]
        raise UnknownNodeError(f"unknown transition {t!r}")

    def preset(self, t: NodeRef) -> frozenset[str]:
        """Places with an input or read arc into ``t``."""
        i = self.transition_index(t)
        return frozenset(self.places[p] for p, _ in self.consume[i] + self.reads[i])

    def postset(self, t: NodeRef) -> frozenset[str]:
        i = self.transition_index(t)
        return frozenset(self.places[p] for p, _ in self.produce[i])

    def marking(self, counts: Mapping[str, int] | None = None, **kw: int) -> Marking:
        """Marking from a name->count mapping; unnamed places get zero.

        >>> Net.build(["a", "b"], []).marking(b=2)
        Marking((0, 2))
        """
        counts = dict(counts or {}, **kw)
        m = [0] * len(self.places)
        for name, c in counts.items():
            m[self.place_index(name)] = c
        return Marking(m)

    def marking_dict(self, m: Sequence[int]) -> dict[str, int]:
        """Nonzero entries of ``m`` keyed by place name."""
        return {self.places[i]: c for i, c in enumerate(m) if c}

    def without_read_arcs(self) -> "Net":
        """Equivalent net where each read arc becomes a consume/produce self-loop.

        Reachability under interleaving semantics is unchanged; only step
        semantics differ (a self-loop cannot be shared inside a step).
        """
        weights: dict[tuple[int, str, int], int] = {}
        for a in self.arcs:
            if a.kind == READ:
                for kind in (INPUT, OUTPUT):
                    key = (a.transition, kind, a.place)
                    weights[key] = weights.get(key, 0) + a.weight
            else:
                key = (a.transition, a.kind, a.place)
                weights[key] = weights.get(key, 0) + a.weight
        arcs = tuple(Arc(t, k, p, w) for (t, k, p), w in weights.items())
        return Net(self.places, self.transitions, arcs, self.initial_marking, self.name)

    def with_initial_marking(self, m: Sequence[int]) -> "Net":
        return Net(self.places, self.transitions, self.arcs, Marking(m), self.name)


def _check_marking(net: Net, m: Sequence[int]) -> None:
    if len(m) != len(net.places):
        raise NetStructureError(f"marking has {len(m)} entries, net has {len(net.places)} places")


def is_enabled(net: Net, m: Sequence[int], t: NodeRef) -> bool:
    i = net.transition_index(t)
    _check_marking(net, m)
    return all(m[p] >= w for p, w in net.consume[i]) and all(m[p] >= w for p, w in net.reads[i])


def fire(net: Net, m: Sequence[int], t: NodeRef) -> Marking:
    """Fire ``t`` at ``m``. Raises :class:`NotEnabledError` if it is disabled."""
    i = net.transition_index(t)
    if not is_enabled(net, m, i):
        raise NotEnabledError(f"transition {net.transitions[i]!r} is not enabled")
    out = list(m)
    for p, w in net.consume[i]:
        out[p] -= w
    for p, w in net.produce[i]:
        out[p] += w
    return Marking(out)


def enabled_set(net: Net, m: Sequence[int]) -> frozenset[str]:
    return frozenset(net.transitions[i] for i in enabled_indices(net, m))


def enabled_indices(net: Net, m: Sequence[int]) -> list[int]:
    """Indices of enabled transitions in declaration order."""
    _check_marking(net, m)
    out = []
    for i in range(len(net.transitions)):
        if all(m[p] >= w for p, w in net.consume[i]) and all(m[p] >= w for p, w in net.reads[i]):
            out.append(i)
    return out


def _step_indices(net: Net, step: Iterable[NodeRef]) -> list[int]:
    idx = [net.transition_index(t) for t in step]
    if not idx:
        raise NetStructureError("a step must contain at least one transition")
    if len(set(idx)) != len(idx):
        raise NetStructureError("a step may not contain the same transition twice")
    return idx


def step_enabled(net: Net, m: Sequence[int], step: Iterable[NodeRef]) -> bool:
    """Whether all transitions of ``step`` can fire simultaneously.

    Consumed tokens add up across the step; read tokens are shared, so a
    place only needs the largest read weight on top of what is consumed.
    """
    idx = _step_indices(net, step)
    _check_marking(net, m)
    need_consume: dict[int, int] = {}
    need_read: dict[int, int] = {}
    for i in idx:
        for p, w in net.consume[i]:
            need_consume[p] = need_consume.get(p, 0) + w
        for p, w in net.reads[i]:
            need_read[p] = max(need_read.get(p, 0), w)
    for p in set(need_consume) | set(need_read):
        if m[p] < need_consume.get(p, 0) + need_read.get(p, 0):
            return False
    return True


def fire_step(net: Net, m: Sequence[int], step: Iterable[NodeRef]) -> Marking:
    idx = _step_indices(net, step)
    if not step_enabled(net, m, idx):
        names = sorted(net.transitions[i] for i in idx)
        raise NotEnabledError(f"step {names} is not enabled")
    out = list(m)
    for i in idx:
        for p, w in net.consume[i]:
            out[p] -= w
        for p, w in net.produce[i]:
            out[p] += w
    return Marking(out)


def _distinct_pair(net: Net, t1: NodeRef, t2: NodeRef) -> tuple[int, int]:
    i, j = net.transition_index(t1), net.transition_index(t2)
    if i == j:
        raise NetStructureError("conflict/concurrency is defined for two distinct transitions")
    return i, j


def in_conflict(net: Net, m: Sequence[int], t1: NodeRef, t2: NodeRef) -> bool:
    """Both enabled, but not enabled together: one firing can disable the other."""
    i, j = _distinct_pair(net, t1, t2)
    return is_enabled(net, m, i) and is_enabled(net, m, j) and not step_enabled(net, m, (i, j))


def are_concurrent(net: Net, m: Sequence[int], t1: NodeRef, t2: NodeRef) -> bool:
    i, j = _distinct_pair(net, t1, t2)
    return step_enabled(net, m, (i, j))
