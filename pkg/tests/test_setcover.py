from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from domsetkit.errors import InputError, ResourceError
from domsetkit.graph import INF, gen_random, to_mask
from domsetkit.oracle import brute_min_dominating, brute_min_set_cover
from domsetkit.setcover import (
    SetCoverInstance, closed_neighborhood_instance, greedy_approx, greedy_dominating_set,
    harmonic, solve_generalized,
)


def test_generalized_examples():
    inst = SetCoverInstance(2, [{0}, {1}, {0, 1}], [1, 1, 1])
    table = solve_generalized(inst)
    assert table.weight(0) == 0 and table.subfamily(0) == []
    assert table.weight(0b11) == 1 and table.subfamily(0b11) == [2]
    assert table.weight(0b01) == 1


def test_generalized_uncoverable_element():
    table = solve_generalized(SetCoverInstance(2, [{0}]))
    assert table.weight(0b10) == INF and table.subfamily(0b10) is None


def test_generalized_cap():
    with pytest.raises(ResourceError):
        solve_generalized(SetCoverInstance(26, [{0}]))


family = st.integers(1, 6).flatmap(lambda u: st.tuples(
    st.just(u),
    st.lists(st.sets(st.integers(0, u - 1), min_size=1), min_size=1, max_size=7),
    st.data()))


@settings(max_examples=60, deadline=None)
@given(family)
def test_generalized_matches_brute_force(args):
    u, fam, data = args
    weights = data.draw(st.lists(st.integers(0, 6), min_size=len(fam), max_size=len(fam)))
    table = solve_generalized(SetCoverInstance(u, fam, weights))
    for a in range(1 << u):
        target = [e for e in range(u) if a >> e & 1]
        expect = brute_min_set_cover(u, fam, weights, target).weight
        assert table.weight(a) == expect
        sub = table.subfamily(a)
        if expect < INF:
            assert sum(weights[j] for j in sub) == expect
            assert to_mask(set().union(*[fam[j] for j in sub])) & a == a


def test_greedy_examples():
    assert greedy_approx(SetCoverInstance(3, [{0, 1, 2}])) == ([0], 1)
    inst = SetCoverInstance(6, [{0, 1, 2, 3}, {0, 1}, {2, 3}, {4, 5}])
    assert greedy_approx(inst) == ([0, 3], 2)
    weighted = SetCoverInstance(2, [{0}, {1}, {0, 1}], [1, 1, 3])
    assert greedy_approx(weighted) == ([0, 1], 2)
    with pytest.raises(InputError):
        greedy_approx(SetCoverInstance(2, [{0}]))


@settings(max_examples=60, deadline=None)
@given(family)
def test_greedy_within_harmonic_bound(args):
    u, fam, _ = args
    if set().union(*fam) != set(range(u)):
        return
    chosen, w = greedy_approx(SetCoverInstance(u, fam))
    assert set().union(*[fam[j] for j in chosen]) == set(range(u))
    opt = brute_min_set_cover(u, fam).weight
    assert w <= opt * harmonic(max(len(f) for f in fam))


def test_harmonic():
    assert harmonic(0) == 0
    assert harmonic(3) == Fraction(11, 6)


def test_greedy_dominating_set_dominates():
    for seed in range(20):
        g = gen_random(10, 0.3, seed)
        s, w = greedy_dominating_set(g)
        opt = brute_min_dominating(g).weight
        assert all(v in s or s & set(g.adj[v]) for v in range(g.n))
        assert opt <= w <= opt * harmonic(max(len(g.adj[v]) for v in range(g.n)) + 1)


def test_closed_neighborhood_instance():
    g = gen_random(6, 0.5, 1)
    inst = closed_neighborhood_instance(g)
    for v in range(g.n):
        assert inst.sets[v] == frozenset(g.closed_neighborhood(v))


def test_instance_validation():
    with pytest.raises(InputError):
        SetCoverInstance(2, [{0}], [1, 2])
    with pytest.raises(InputError):
        SetCoverInstance(2, [{3}])
    with pytest.raises(InputError):
        SetCoverInstance(2, [{0}], [-1])


def test_monotone_in_target():
    inst = SetCoverInstance(5, [{0, 1}, {1, 2, 3}, {3, 4}, {0, 4}, {2}], [2, 3, 1, 2, 1])
    table = solve_generalized(inst)
    for a in range(32):
        for b in range(32):
            if a & b == a:
                assert table.weight(a) <= table.weight(b)
    for k in range(6):
        for c in combinations(range(5), k):
            assert table.weight(to_mask(c)) == brute_min_set_cover(5, inst.sets, inst.weights, c).weight
