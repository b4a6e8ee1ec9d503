import random
from functools import reduce
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_invariants
from pnverify.errors import ConsistencyError, NetStructureError
from pnverify.generators import random_net
from pnverify.net import Marking, Net, enabled_indices, fire
from pnverify.statespace import explore
from pnverify.structural import (
    PLACE,
    InvariantVector,
    check_p_invariant,
    farkas,
    incidence,
    is_p_invariant,
    is_t_invariant,
    p_invariants,
    t_invariants,
)


def test_incidence_fig1(fig1):
    c = incidence(fig1)
    assert c.shape == (3, 1)
    assert c[:, 0].tolist() == [-1, -3, 2]


def test_incidence_read_only_column():
    net = Net.build({"p": 1}, ["t"], reads=[("p", "t", 2)])
    assert incidence(net).tolist() == [[0]]


def test_incidence_empty():
    c = incidence(Net.build({}, []))
    assert c.shape == (0, 0)


def test_scenario_p_invariants(scenario_net):
    invs = {tuple(sorted(v.as_dict().items())) for v in p_invariants(scenario_net)}
    assert (("attention", 1), ("no_attention", 1), ("not_present", 1)) in invs
    assert (("counter", 1), ("counter'", 1)) in invs
    assert (("error_occurred", 1), ("normal", 1), ("p2", 1), ("user_informed", 1)) in invs


def test_self_loop_invariant():
    net = Net.build({"p": 1}, ["t"], [("p", "t"), ("t", "p")])
    (v,) = p_invariants(net)
    assert v.as_dict() == {"p": 1}


def test_t_invariants(fig3a, fig3b):
    (v,) = t_invariants(fig3a)
    assert v.weights == (1, 1, 1, 1, 1)
    assert t_invariants(fig3b) == []
    assert t_invariants(Net.build({"p": 1}, [])) == []


def test_invariants_are_sorted_and_canonical(fixture_net):
    invs = p_invariants(fixture_net)
    keys = [([i for i, w in enumerate(v.weights) if w], v.weights) for v in invs]
    assert keys == sorted(keys)
    for v in invs + t_invariants(fixture_net):
        assert reduce(gcd, v.weights) == 1


def _supports(vectors):
    return {frozenset(i for i, w in enumerate(y) if w) for y in vectors}


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_farkas_against_enumeration(seed):
    net = random_net(random.Random(seed), max_places=4, max_transitions=4)
    c = incidence(net).tolist()
    generated = farkas(c)
    for y in generated:
        assert all(sum(y[i] * c[i][j] for i in range(len(c))) == 0 for j in range(len(c[0]) if c else 0))
    brute = brute_invariants(c, 3)
    # minimal supports found by enumeration must all be generated
    minimal = {s for s in _supports(brute) if not any(o < s for o in _supports(brute))}
    assert minimal <= _supports(generated)
    # and every generated support is minimal among all solutions found
    for s in _supports(generated):
        assert not any(o < s for o in _supports(brute))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_weighted_sum_preserved_by_firing(seed):
    rng = random.Random(seed)
    net = random_net(rng)
    invs = p_invariants(net)
    for _ in range(20):
        m = Marking(rng.randint(0, 3) for _ in net.places)
        for t in enabled_indices(net, m):
            m2 = fire(net, m, t)
            for v in invs:
                assert v.value(m) == v.value(m2)


def test_t_invariant_definition(fixture_net):
    c = incidence(fixture_net)
    for v in t_invariants(fixture_net):
        assert is_t_invariant(fixture_net, v)
        assert not (c @ np.array(v.weights)).any()


def test_check_p_invariant_scenario(scenario_net):
    g = explore(scenario_net)
    ctx = InvariantVector.from_dict(scenario_net, {"attention": 1, "no_attention": 1, "not_present": 1})
    res = check_p_invariant(scenario_net, ctx, g)
    assert res.holds and res.constant == 1
    cnt = InvariantVector.from_dict(scenario_net, {"counter": 1, "counter'": 1})
    res = check_p_invariant(scenario_net, cnt, g)
    assert res.holds and res.constant == 3


def test_check_p_invariant_rejects_non_invariant(scenario_net):
    g = explore(scenario_net)
    v = InvariantVector.from_dict(scenario_net, {"normal": 1, "counter": 2})
    res = check_p_invariant(scenario_net, v, g)
    assert not res.holds and res.constant is None


def test_constant_but_not_algebraic(fig3b):
    # t4 is dead, so p2 + p3 + p4 + p6 + p1 stays 1 although t4 breaks it
    g = explore(fig3b)
    v = InvariantVector.from_dict(fig3b, {"p1": 1, "p2": 1, "p3": 1, "p4": 1, "p6": 1})
    res = check_p_invariant(fig3b, v, g)
    assert not res.holds and res.constant == 1


def test_inconsistency_is_detected(fig3a):
    g = explore(fig3a)
    g.states[3] = Marking([1] * 6)
    v = p_invariants(fig3a)[0]
    with pytest.raises(ConsistencyError):
        check_p_invariant(fig3a, v, g)


def test_invariant_vector_validation(fig1):
    with pytest.raises(NetStructureError):
        InvariantVector(PLACE, (0, 0, 0), fig1.places)
    with pytest.raises(NetStructureError):
        InvariantVector.from_dict(fig1, {"zz": 1})
    v = InvariantVector.from_dict(fig1, {"p0": 2, "p2": 1})
    assert is_p_invariant(fig1, v)
