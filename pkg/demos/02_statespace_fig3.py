"""
Reachability, deadlock and liveness
===================================

Two five-transition nets: one cycles forever, the other gets stuck.
"""

from _paths import load
from pnverify import (
    causally_dependent,
    dead_transitions,
    deadlocks,
    explore,
    format_marking,
    in_conflict,
    liveness,
)

# fork/join cycle
net = load("fig3a")
g = explore(net)
print(f"fig3a: {len(g.states)} states, {len(g.edges)} edges")
for s in g.states:
    print("  ", format_marking(s, net))
report = liveness(g)
print("deadlock-free:", report.deadlock_free)
print("classification:", report.classification)

# t4 waits for both branches; t2 and t3 are independent
for a, b in [("t1", "t4"), ("t2", "t4"), ("t3", "t4"), ("t2", "t3"), ("t3", "t2")]:
    print(f"causally_dependent({a}, {b}) = {bool(causally_dependent(net, a, b))}")

# a choice at the start means t4 can never fire
net = load("fig3b")
g = explore(net)
print("\nfig3b conflict(t1, t2) at m0:", in_conflict(net, net.initial_marking, "t1", "t2"))
print("dead transitions:", sorted(dead_transitions(g)))
print("deadlocks:", [format_marking(m, net) for m in deadlocks(g)])
for m in deadlocks(g):
    path = [net.transitions[t] for t in g.path_to(g.index[m])]
    print("  path to", format_marking(m, net), "=", " ".join(path))
