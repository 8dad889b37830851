from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from domsetkit.errors import ResourceError
from domsetkit.graph import INF, Graph, cycle_graph, gen_random, gen_random_weights, path_graph
from domsetkit.oracle import (
    brute_min_dominating, brute_min_hitting_set, brute_min_set_cover, rds_brute_force,
)


def naive_dominating(g, w, targets, forced=(), banned=()):
    """Plain enumeration of every vertex subset."""
    best = INF
    for k in range(g.n + 1):
        for s in combinations(range(g.n), k):
            ss = set(s)
            if not set(forced) <= ss or ss & set(banned):
                continue
            if all(t in ss or ss & set(g.adj[t]) for t in targets):
                best = min(best, sum(w[v] for v in ss))
    return best


def test_examples():
    assert brute_min_dominating(path_graph(4), targets=[], forced_in=[1, 2]).weight == 2
    assert brute_min_dominating(cycle_graph(5)).weight == 2
    assert brute_min_dominating(cycle_graph(4), targets=[1, 2, 3], forbidden=[0]).weight == 1


def test_infeasible_constraints():
    res = brute_min_dominating(path_graph(2), forbidden=[0, 1])
    assert res.weight == INF and res.witness is None and not res.feasible
    assert not brute_min_dominating(path_graph(3), forced_in=[0], forbidden=[0]).feasible


def test_cap():
    with pytest.raises(ResourceError):
        brute_min_dominating(Graph(23))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.floats(0, 1), st.integers(0, 10**6), st.data())
def test_matches_plain_enumeration(n, p, seed, data):
    g = gen_random_weights(gen_random(n, p, seed), seed, 0, 5)
    targets = data.draw(st.sets(st.integers(0, n - 1)))
    forced = data.draw(st.sets(st.integers(0, n - 1), max_size=2))
    banned = data.draw(st.sets(st.integers(0, n - 1), max_size=2)) - forced
    res = brute_min_dominating(g, targets=targets, forced_in=forced, forbidden=banned)
    assert res.weight == naive_dominating(g, g.weights, targets, forced, banned)
    if res.feasible:
        assert forced <= res.witness and not res.witness & banned
        assert g.weight(res.witness) == res.weight
        assert res.count >= 1


def test_rds_brute_force():
    assert rds_brute_force(path_graph(3)).weight == 1
    assert rds_brute_force(cycle_graph(4), exempt=[0]).weight == 1
    assert rds_brute_force(Graph(3), exempt=[0, 1, 2]).weight == 0


def test_set_systems():
    assert brute_min_set_cover(2, [[0, 1]]).weight == 1
    assert brute_min_set_cover(2, [[0], [1]]).weight == 2
    assert brute_min_set_cover(3, [[0, 1], [1, 2], [2], [0]]).weight == 2
    assert brute_min_set_cover(2, [[0]]).weight == INF
    assert brute_min_hitting_set(2, [[0, 1]]).weight == 1
    assert brute_min_hitting_set(3, [[0], [1, 2], [2]]).weight == 2
    assert brute_min_hitting_set(3, [[0], [1, 2], [2]]).witness == frozenset({0, 2})


@settings(max_examples=60)
@given(st.integers(1, 5), st.data())
def test_set_cover_matches_enumeration(u, data):
    fam = data.draw(st.lists(st.sets(st.integers(0, u - 1), min_size=1), min_size=1, max_size=5))
    best = INF
    for k in range(len(fam) + 1):
        for pick in combinations(range(len(fam)), k):
            if set().union(*[fam[j] for j in pick]) >= set(range(u)):
                best = min(best, k)
    assert brute_min_set_cover(u, fam).weight == best
