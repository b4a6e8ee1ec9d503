"""Explicit reachability graphs and the behavioural analyses built on them.

Exploration is breadth-first from the initial marking with transitions tried
in declaration order, so state numbers, edge order and witnesses are
reproducible. A graph that hit its state limit is *truncated*; analyses that
need the full state space refuse it with :class:`AnalysisError`.
"""

from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from .errors import AnalysisError, TruncatedError
from .net import Marking, Net, NodeRef, enabled_indices, fire

DEFAULT_LIMIT = 1_000_000

DEAD = "dead"
QUASI_LIVE = "quasi-live"
LIVE = "live"

OMEGA = math.inf


def default_limit() -> int:
    """State cap, overridable through ``PNVERIFY_LIMIT``."""
    raw = os.environ.get("PNVERIFY_LIMIT")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise AnalysisError(f"PNVERIFY_LIMIT must be a positive integer, got {raw!r}") from None
        if value < 1:
            raise AnalysisError(f"PNVERIFY_LIMIT must be a positive integer, got {raw!r}")
        return value
    return DEFAULT_LIMIT


@dataclass
class ReachabilityGraph:
    """Markings reachable from ``net.initial_marking``; state 0 is the initial one.

    ``edges`` holds ``(source, transition_index, target)`` triples in
    discovery order. ``expanded`` counts the states whose successors were all
    generated; it equals ``len(states)`` iff the graph is complete.
    """

    net: Net
    states: list[Marking]
    edges: list[tuple[int, int, int]]
    limit: int
    expanded: int
    index: dict[Marking, int] = field(repr=False)
    succ: list[list[tuple[int, int]]] = field(repr=False)

    @property
    def complete(self) -> bool:
        return self.expanded == len(self.states)

    @property
    def status(self) -> str:
        return "complete" if self.complete else f"truncated({self.limit})"

    def __len__(self):
        return len(self.states)

    def require_complete(self, what: str = "this analysis") -> None:
        if not self.complete:
            raise TruncatedError(
                f"{what} needs the full state space, but exploration stopped at "
                f"{self.limit} states; raise the limit"
            )

    def predecessors(self) -> list[list[tuple[int, int]]]:
        pred: list[list[tuple[int, int]]] = [[] for _ in self.states]
        for s, t, d in self.edges:
            pred[d].append((t, s))
        return pred

    def path_to(self, target: int) -> list[int]:
        """Transition indices of a shortest path from state 0 to ``target``."""
        return _bfs_path(self, None, lambda s: s == target) or []


def explore(net: Net, limit: int | None = None, disabled: Iterable[NodeRef] = ()) -> ReachabilityGraph:
    """Breadth-first reachability graph of ``net``.

    Stops with a truncated graph as soon as a new state would exceed
    ``limit``. Transitions in ``disabled`` are never fired.
    """
    limit = default_limit() if limit is None else limit
    if limit < 1:
        raise ValueError("limit must be positive")
    skip = {net.transition_index(t) for t in disabled}
    m0 = net.initial_marking
    states = [m0]
    index = {m0: 0}
    succ: list[list[tuple[int, int]]] = [[]]
    edges: list[tuple[int, int, int]] = []
    expanded = 0
    truncated = False
    while expanded < len(states) and not truncated:
        s = expanded
        m = states[s]
        out = []
        for t in enabled_indices(net, m):
            if t in skip:
                continue
            m2 = fire(net, m, t)
            d = index.get(m2)
            if d is None:
                if len(states) >= limit:
                    truncated = True
                    break
                d = len(states)
                index[m2] = d
                states.append(m2)
                succ.append([])
            out.append((t, d))
        if truncated:
            break
        succ[s] = out
        edges.extend((s, t, d) for t, d in out)
        expanded += 1
    return ReachabilityGraph(net, states, edges, limit, expanded, index, succ)


def _bfs_path(g: ReachabilityGraph, allowed: set[int] | None, goal: Callable[[int], bool]):
    """Shortest path from 0 to a goal state, staying inside ``allowed``
    (``None`` = unrestricted) except for the goal state itself."""
    if goal(0):
        return []
    parent = {0: None}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        if s >= g.expanded:
            continue
        for t, d in g.succ[s]:
            if d in parent:
                continue
            parent[d] = (s, t)
            if goal(d):
                path = []
                while parent[d] is not None:
                    d, t = parent[d]
                    path.append(t)
                return path[::-1]
            if allowed is None or d in allowed:
                queue.append(d)
    return None


# -- graph analyses -------------------------------------------------------


def deadlocks(g: ReachabilityGraph) -> list[Marking]:
    """Reachable markings with no enabled transition, in state order."""
    g.require_complete("deadlock detection")
    return [g.states[s] for s in range(len(g.states)) if not g.succ[s]]


def dead_transitions(g: ReachabilityGraph) -> frozenset[str]:
    g.require_complete("dead-transition detection")
    fired = {t for _, t, _ in g.edges}
    return frozenset(name for i, name in enumerate(g.net.transitions) if i not in fired)


@dataclass(frozen=True)
class LivenessReport:
    classification: dict[str, str]
    deadlock_free: bool
    dead_markings: tuple[Marking, ...]

    def live(self) -> frozenset[str]:
        return frozenset(t for t, c in self.classification.items() if c == LIVE)


def _backward(pred, targets: Iterable[int]) -> set[int]:
    seen = set(targets)
    queue = deque(seen)
    while queue:
        d = queue.popleft()
        for _, s in pred[d]:
            if s not in seen:
                seen.add(s)
                queue.append(s)
    return seen


def states_reaching(g: ReachabilityGraph, targets: Iterable[int]) -> set[int]:
    """States from which some state in ``targets`` is reachable."""
    return _backward(g.predecessors(), targets)


def liveness(g: ReachabilityGraph) -> LivenessReport:
    """Classify every transition as dead, quasi-live or live.

    Live means: from every reachable state, a state where the transition is
    enabled can still be reached. Checked by backward reachability from the
    sources of the transition's edges.
    """
    g.require_complete("liveness analysis")
    pred = g.predecessors()
    sources: list[set[int]] = [set() for _ in g.net.transitions]
    for s, t, _ in g.edges:
        sources[t].add(s)
    n = len(g.states)
    result = {}
    for t, name in enumerate(g.net.transitions):
        if not sources[t]:
            result[name] = DEAD
        else:
            result[name] = LIVE if len(_backward(pred, sources[t])) == n else QUASI_LIVE
    dead = tuple(deadlocks(g))
    return LivenessReport(result, not dead, dead)


def place_bounds(g: ReachabilityGraph) -> dict[str, int]:
    """Maximum token count of every place over all reachable states."""
    g.require_complete("bound computation")
    return {p: max(m[i] for m in g.states) for i, p in enumerate(g.net.places)}


# -- coverability -------------------------------------------------------------


@dataclass
class CoverabilityNode:
    """Karp-Miller tree node; ``marking`` entries may be :data:`OMEGA`."""

    marking: tuple
    children: list[tuple[str, "CoverabilityNode"]] = field(default_factory=list)
    duplicate: bool = False

    def walk(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(child for _, child in reversed(node.children))


@dataclass
class KarpMillerResult:
    root: CoverabilityNode
    bounded: bool
    size: int

    def markings(self) -> set[tuple]:
        return {n.marking for n in self.root.walk()}

    def unbounded_places(self, net: Net) -> list[str]:
        hit = set()
        for node in self.root.walk():
            hit.update(i for i, c in enumerate(node.marking) if c == OMEGA)
        return [net.places[i] for i in sorted(hit)]


def karp_miller(net: Net, limit: int | None = None) -> KarpMillerResult:
    """Karp-Miller coverability tree (duplicate nodes anywhere in the tree are
    not expanded). Read arcs are handled through their self-loop encoding.

    The net is unbounded iff some node carries an ω entry.
    """
    limit = default_limit() if limit is None else limit
    loop_net = net.without_read_arcs()
    pre = [loop_net.consume[t] for t in range(len(net.transitions))]
    post = [loop_net.produce[t] for t in range(len(net.transitions))]

    root = CoverabilityNode(tuple(net.initial_marking))
    seen = {root.marking}
    size = 1
    # stack entries: (node, ancestor markings from root to node inclusive)
    stack = [(root, (root.marking,))]
    while stack:
        node, path = stack.pop()
        m = node.marking
        for t, name in enumerate(net.transitions):
            if not all(m[p] >= w for p, w in pre[t]):
                continue
            new = list(m)
            for p, w in pre[t]:
                new[p] -= w
            for p, w in post[t]:
                new[p] += w
            for anc in path:
                if anc != tuple(new) and all(a <= b for a, b in zip(anc, new)):
                    for i, (a, b) in enumerate(zip(anc, new)):
                        if b > a:
                            new[i] = OMEGA
            new_t = tuple(new)
            child = CoverabilityNode(new_t)
            node.children.append((name, child))
            size += 1
            if size > limit:
                raise TruncatedError(f"coverability tree exceeded {limit} nodes")
            if new_t in seen:
                child.duplicate = True
                continue
            seen.add(new_t)
            stack.append((child, path + (new_t,)))
    bounded = not any(OMEGA in n.marking for n in root.walk())
    return KarpMillerResult(root, bounded, size)


# -- reachability queries ------------------------------------------------------

Goal = Union[Sequence[int], Callable[[Marking], bool]]


@dataclass(frozen=True)
class ReachResult:
    """``status`` is ``"reachable"``, ``"unreachable"`` or ``"limit"``."""

    status: str
    witness: tuple[str, ...] | None = None
    marking: Marking | None = None

    def __bool__(self):
        return self.status == "reachable"


def reachable(net: Net, goal: Goal, limit: int | None = None) -> ReachResult:
    """Shortest firing sequence from the initial marking to a goal marking.

    ``goal`` is either an exact marking or a predicate on markings.
    "unreachable" is only reported after the whole state space was seen.
    """
    limit = default_limit() if limit is None else limit
    if callable(goal):
        test = goal
    else:
        target = Marking(goal)
        test = lambda m: m == target  # noqa: E731
    m0 = net.initial_marking
    if test(m0):
        return ReachResult("reachable", (), m0)
    parent: dict[Marking, tuple[Marking, int] | None] = {m0: None}
    queue = deque([m0])
    while queue:
        m = queue.popleft()
        for t in enabled_indices(net, m):
            m2 = fire(net, m, t)
            if m2 in parent:
                continue
            if len(parent) >= limit:
                return ReachResult("limit")
            parent[m2] = (m, t)
            if test(m2):
                path = []
                cur = m2
                while parent[cur] is not None:
                    cur, tt = parent[cur]
                    path.append(net.transitions[tt])
                return ReachResult("reachable", tuple(reversed(path)), m2)
            queue.append(m2)
    return ReachResult("unreachable")


@dataclass(frozen=True)
class CausalVerdict:
    """Result of :func:`causally_dependent`; truthy iff dependent.

    ``second_fires`` is False when the later transition never fires at all,
    in which case ``dependent`` is vacuously False.
    """

    dependent: bool
    second_fires: bool

    def __bool__(self):
        return self.dependent


def causally_dependent(net: Net, t1: NodeRef, t2: NodeRef, limit: int | None = None) -> CausalVerdict:
    """Whether every run that fires ``t2`` fires ``t1`` strictly before it.

    Equivalent to: with ``t1`` removed from the net, ``t2`` can never fire.
    Indirect dependencies (through intermediate transitions) count.
    """
    i, j = net.transition_index(t1), net.transition_index(t2)
    full = explore(net, limit)
    full.require_complete("causal dependency")
    if not any(t == j for _, t, _ in full.edges):
        return CausalVerdict(False, False)
    if i == j:
        return CausalVerdict(False, True)
    reduced = explore(net, limit, disabled=[i])
    reduced.require_complete("causal dependency")
    return CausalVerdict(not any(t == j for _, t, _ in reduced.edges), True)
