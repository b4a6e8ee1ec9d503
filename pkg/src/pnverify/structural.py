"""Incidence matrix and semi-positive P/T-invariants (Farkas elimination).

All invariant arithmetic uses Python integers, so intermediate coefficient
growth cannot overflow. The incidence matrix itself is returned as a numpy
``int64`` array for convenient linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, NetStructureError
from .net import INPUT, OUTPUT, Net
from .statespace import ReachabilityGraph

PLACE = "place"
TRANSITION = "transition"


def incidence(net: Net) -> np.ndarray:
    """``C[p, t] = W(t, p) - W(p, t)``; read arcs contribute nothing."""
    c = np.zeros((len(net.places), len(net.transitions)), dtype=np.int64)
    for a in net.arcs:
        if a.kind == INPUT:
            c[a.place, a.transition] -= a.weight
        elif a.kind == OUTPUT:
            c[a.place, a.transition] += a.weight
    return c


@dataclass(frozen=True)
class InvariantVector:
    """Nonnegative integer weighting over places or transitions, gcd 1."""

    kind: str
    weights: tuple[int, ...]
    names: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in (PLACE, TRANSITION):
            raise NetStructureError(f"invariant kind must be 'place' or 'transition', got {self.kind!r}")
        if len(self.weights) != len(self.names):
            raise NetStructureError("invariant weights and names differ in length")
        if any(w < 0 for w in self.weights) or not any(self.weights):
            raise NetStructureError("invariant weights must be nonnegative and not all zero")

    @classmethod
    def from_dict(cls, net: Net, weights: dict[str, int], kind: str = PLACE) -> "InvariantVector":
        names = net.places if kind == PLACE else net.transitions
        unknown = set(weights) - set(names)
        if unknown:
            raise NetStructureError(f"unknown {kind}s in invariant: {sorted(unknown)}")
        return cls(kind, tuple(weights.get(n, 0) for n in names), tuple(names))

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(n for n, w in zip(self.names, self.weights) if w)

    def as_dict(self) -> dict[str, int]:
        return {n: w for n, w in zip(self.names, self.weights) if w}

    def value(self, marking: Sequence[int]) -> int:
        """Weighted token sum (place invariants only)."""
        return sum(w * c for w, c in zip(self.weights, marking))


def _normalize(row: list[int]) -> list[int]:
    g = reduce(gcd, row, 0)
    return [x // g for x in row] if g > 1 else row


def farkas(matrix: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Minimal-support semi-positive solutions ``y >= 0`` of ``y^T A = 0``.

    ``matrix`` has one row per unknown. Rows are combined pairwise to cancel
    one column at a time; rows whose support contains another row's support
    are dropped after each column, which keeps exactly the minimal-support
    generators.
    """
    n = len(matrix)
    cols = len(matrix[0]) if n else 0
    rows = [(list(map(int, matrix[i])), [int(i == k) for k in range(n)]) for i in range(n)]
    for j in range(cols):
        keep = [r for r in rows if r[0][j] == 0]
        pos = [r for r in rows if r[0][j] > 0]
        neg = [r for r in rows if r[0][j] < 0]
        for a, ya in pos:
            for b, yb in neg:
                ca, cb = -b[j], a[j]
                combined = _normalize([ca * x + cb * y for x, y in zip(a + ya, b + yb)])
                keep.append((combined[:cols], combined[cols:]))
        rows = _minimal_support(keep)
    result = {tuple(_normalize(y)) for _, y in rows if any(y)}
    return sorted(result, key=lambda y: ([i for i, w in enumerate(y) if w], y))


def _minimal_support(rows):
    supports = [frozenset(i for i, w in enumerate(y) if w) for _, y in rows]
    out = []
    seen = set()
    for k, (row, sup) in enumerate(zip(rows, supports)):
        if any(other < sup for other in supports):
            continue
        key = tuple(row[1])
        if key in seen:
            continue
        # equal supports: keep only one representative per distinct vector
        seen.add(key)
        out.append(row)
    return out


def p_invariants(net: Net) -> list[InvariantVector]:
    """Minimal-support semi-positive place invariants, sorted by support."""
    c = incidence(net).tolist()
    return [InvariantVector(PLACE, y, net.places) for y in farkas(c)]


def t_invariants(net: Net) -> list[InvariantVector]:
    """Minimal-support semi-positive transition invariants, sorted by support."""
    ct = incidence(net).T.tolist()
    return [InvariantVector(TRANSITION, y, net.transitions) for y in farkas(ct)]


def is_p_invariant(net: Net, v: InvariantVector) -> bool:
    if v.kind != PLACE or v.names != net.places:
        raise NetStructureError("vector is not a place vector of this net")
    c = incidence(net)
    return all(sum(w * int(c[p, t]) for p, w in enumerate(v.weights)) == 0 for t in range(c.shape[1]))


def is_t_invariant(net: Net, v: InvariantVector) -> bool:
    if v.kind != TRANSITION or v.names != net.transitions:
        raise NetStructureError("vector is not a transition vector of this net")
    c = incidence(net)
    return all(sum(w * int(c[p, t]) for t, w in enumerate(v.weights)) == 0 for p in range(c.shape[0]))


@dataclass(frozen=True)
class InvariantCheck:
    """``holds`` is the algebraic verdict; ``constant`` is the weighted sum
    when it is the same in every reachable state, else ``None``."""

    holds: bool
    constant: int | None
    values: frozenset[int]


def check_p_invariant(net: Net, v: InvariantVector, g: ReachabilityGraph) -> InvariantCheck:
    """Check ``v`` algebraically and by enumeration over ``g``.

    An algebraic invariant whose weighted sum varies over the reachable
    states is impossible and raises :class:`ConsistencyError`. The converse
    is allowed: a vector can be constant on the reachable states without
    being an invariant (for instance when the offending transitions are dead).
    """
    g.require_complete("invariant checking")
    holds = is_p_invariant(net, v)
    values = frozenset(v.value(m) for m in g.states)
    constant = next(iter(values)) if len(values) == 1 else None
    if holds and constant is None:
        raise ConsistencyError(
            f"{v.as_dict()} satisfies y^T C = 0 but takes values {sorted(values)} on reachable states"
        )
    return InvariantCheck(holds, constant, values)
