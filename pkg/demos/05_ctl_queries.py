"""
CTL queries with witnesses
==========================

Ask temporal questions and replay the traces the checker returns.
"""

from _paths import load
from pnverify import check, explore, fire, format_marking

net = load("fig3b")
g = explore(net)

queries = [
    "EF enabled(t4)",
    "EF tokens(p6) = 1",
    "AG EF enabled(t1)",
    "AF deadlock",
    "EG tokens(p3) = 0",
    "A[tokens(p1) = 1 U tokens(p2) = 1]",
]
for q in queries:
    v = check(net, g, q)
    line = f"{q:40s} {'holds' if v.holds else 'fails'}"
    if v.trace is not None:
        m = net.initial_marking
        for t in v.trace:
            m = fire(net, m, t)
        line += f"   {v.trace_kind}: {' '.join(v.trace) or '(empty)'} -> {format_marking(m, net)}"
    print(line)

# states satisfying a formula
v = check(net, g, "EX true", labels=True)
print("\nstates with a successor:", [format_marking(g.states[s], net) for s in sorted(v.satisfying)])
