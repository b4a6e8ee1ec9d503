"""Seeded random nets for property tests and benchmarks."""

from __future__ import annotations

import random

from .net import INPUT, OUTPUT, READ, Arc, Marking, Net
from .statespace import explore


def random_net(
    rng: random.Random,
    max_places: int = 6,
    max_transitions: int = 6,
    max_weight: int = 2,
    max_tokens: int = 2,
    read_probability: float = 0.15,
) -> Net:
    """A small net with weighted input, output and read arcs.

    Every (place, transition) pair independently gets nothing, an input arc,
    an output arc, a read arc, or an input and an output arc.
    """
    n_places = rng.randint(1, max_places)
    n_trans = rng.randint(1, max_transitions)
    arcs = []
    for t in range(n_trans):
        for p in range(n_places):
            w = lambda: rng.randint(1, max_weight)  # noqa: E731
            r = rng.random()
            if r < read_probability:
                arcs.append(Arc(t, READ, p, w()))
            elif r < read_probability + 0.15:
                arcs.append(Arc(t, INPUT, p, w()))
            elif r < read_probability + 0.30:
                arcs.append(Arc(t, OUTPUT, p, w()))
            elif r < read_probability + 0.35:
                arcs.append(Arc(t, INPUT, p, w()))
                arcs.append(Arc(t, OUTPUT, p, w()))
    m0 = Marking(rng.randint(0, max_tokens) for _ in range(n_places))
    return Net(
        tuple(f"p{i}" for i in range(n_places)),
        tuple(f"t{i}" for i in range(n_trans)),
        tuple(arcs),
        m0,
        name="random",
    )


def bounded_random_nets(seed: int, count: int, state_limit: int = 200, **kwargs):
    """Yield ``count`` random nets whose full state space has at most
    ``state_limit`` states. Deterministic for a given seed."""
    rng = random.Random(seed)
    produced = 0
    while produced < count:
        net = random_net(rng, **kwargs)
        if explore(net, state_limit).complete:
            produced += 1
            yield net
