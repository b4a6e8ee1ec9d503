"""
Firing rules and read arcs
==========================

Fire a weighted transition by hand, then watch a read arc test a token
without taking it.
"""

from _paths import load
from pnverify import enabled_set, fire, format_marking, incidence

# a single weighted transition: t0 needs one p0 and three p1, makes two p2
fig1 = load("fig1")
m0 = fig1.initial_marking
print("m0 =", format_marking(m0, fig1))
m1 = fire(fig1, m0, "t0")
print("after t0:", format_marking(m1, fig1))

# the same update as one column of the incidence matrix
C = incidence(fig1)
print("C[:, t0] =", C[:, 0])
print("m0 + C[:, t0] =", (m0 + C[:, 0]).tolist())

# a read arc: t2 needs p1 marked but leaves it alone
fig2 = load("fig2")
m = fire(fig2, fig2.initial_marking, "t0")
print("\nfig2 after t0:", format_marking(m, fig2), "enabled:", sorted(enabled_set(fig2, m)))
m2 = fire(fig2, m, "t2")
print("after t2:", format_marking(m2, fig2))

# the self-loop encoding behaves identically
loop = fig2.without_read_arcs()
print("self-loop encoding gives the same:", fire(loop, m, "t2") == m2)
