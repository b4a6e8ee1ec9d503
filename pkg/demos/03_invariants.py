"""
Place and transition invariants
===============================

Compute invariants from the incidence matrix and compare them against
the explored state space.
"""

from _paths import load
from pnverify import check_p_invariant, explore, incidence, p_invariants, t_invariants

net = load("scenario")
print(incidence(net))

# minimal-support P-invariants
g = explore(net)
for v in p_invariants(net):
    res = check_p_invariant(net, v, g)
    print(" + ".join(v.as_dict()), "=", res.constant, "on all", len(g.states), "states")

# fig3a has one T-invariant: fire everything once and you are back
fig3a = load("fig3a")
for v in t_invariants(fig3a):
    print("\nT-invariant of fig3a:", v.as_dict())
