from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from domsetkit.decomp import decompose_bounded, verify
from domsetkit.errors import InputError, ResourceError, WidthExceeded
from domsetkit.graph import Graph, complete_graph, cycle_graph, gen_random, gen_random_weights, path_graph, star_graph
from domsetkit.modulator import (
    ModulatorInstance, approx2_twd, find_modulator, gadget_graph, modulator_decomposition,
    solve_decomposition_domination, solve_exact_vc, solve_generalized_modulator,
)
from domsetkit.oracle import brute_min_dominating

BOWTIE = Graph(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])


def test_generalized_modulator_examples():
    table = solve_generalized_modulator(ModulatorInstance(star_graph(3), [0], 0))
    assert table.lookup([]) == (frozenset(), 0)
    assert table.lookup([0])[1] == 1
    p4 = path_graph(4, [1, 0, 0, 1])
    table = solve_generalized_modulator(ModulatorInstance(p4, [0, 3], 1))
    sol, wt = table.lookup([0, 3])
    assert wt == 0 and sol == {1, 2}


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.floats(0.1, 0.7), st.integers(0, 10**6), st.data())
def test_generalized_modulator_matches_oracle(n, p, seed, data):
    g = gen_random_weights(gen_random(n, p, seed), seed, 0, 5)
    mod = sorted(data.draw(st.sets(st.integers(0, n - 1), max_size=5)))
    table = solve_generalized_modulator(ModulatorInstance(g, mod, 2))
    for k in range(len(mod) + 1):
        for a in combinations(mod, k):
            sol, wt = table.lookup(a)
            assert wt == brute_min_dominating(g, targets=a).weight
            assert g.weight(sol) == wt
            assert all(v in sol or sol & set(g.adj[v]) for v in a)


def test_decomposition_domination_examples():
    g = gen_random(6, 0.5, 1)
    assert solve_decomposition_domination(ModulatorInstance(g, range(6), 2)) == (frozenset(), 0)
    # the shared vertex is allowed in S and dominates the other four on its own
    sol, wt = solve_decomposition_domination(ModulatorInstance(BOWTIE, [2], 2))
    assert wt == brute_min_dominating(BOWTIE, targets=[0, 1, 3, 4]).weight == 1
    p3 = path_graph(3, [1, 0, 1])
    sol, wt = solve_decomposition_domination(ModulatorInstance(p3, [1], 2))
    assert wt == 0 and sol == {1}


def test_gadget_graph_shape():
    g, ids = gadget_graph(BOWTIE, BOWTIE.weights, [2], [2])
    assert ids[-1] is None and g.n == 5
    x = g.n - 1
    assert sorted(g.adj[x]) == [0, 1, 2, 3] and g.weights[x] == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.floats(0.1, 0.6), st.integers(0, 10**6))
def test_decomposition_domination_matches_oracle(n, p, seed):
    g = gen_random_weights(gen_random(n, p, seed), seed, 0, 5)
    mod = find_modulator(g, 2)
    sol, wt = solve_decomposition_domination(ModulatorInstance(g, mod, 2))
    targets = [v for v in range(n) if v not in mod]
    assert wt == brute_min_dominating(g, targets=targets).weight == g.weight(sol)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 9), st.floats(0.1, 0.6), st.integers(0, 10**6), st.data())
def test_gadget_graphs_never_beat_the_true_optimum(n, p, seed, data):
    g = gen_random_weights(gen_random(n, p, seed), seed, 0, 5)
    mod = sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=3)))
    best = brute_min_dominating(g, targets=[v for v in range(n) if v not in mod]).weight
    for k in range(len(mod) + 1):
        for subset in combinations(mod, k):
            gl, _ = gadget_graph(g, g.weights, mod, subset)
            assert brute_min_dominating(gl).weight >= best


def test_approx2_twd_examples():
    res = approx2_twd(ModulatorInstance(Graph(3), [], 2))
    assert res.solution == {0, 1, 2} and res.weight == 3
    assert approx2_twd(ModulatorInstance(cycle_graph(6), [0], 2)).weight <= 4
    assert approx2_twd(ModulatorInstance(complete_graph(4), [0], 2)).weight <= 2


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.floats(0.1, 0.6), st.integers(0, 10**6), st.integers(0, 2))
def test_approx2_twd_contract(n, p, seed, d):
    g = gen_random_weights(gen_random(n, p, seed), seed, 0, 5)
    mod = find_modulator(g, d)
    res = approx2_twd(ModulatorInstance(g, mod, d))
    opt = brute_min_dominating(g).weight
    cert = res.certificate
    assert all(v in res.solution or res.solution & set(g.adj[v]) for v in range(n))
    assert cert["w1"] <= opt and cert["w2"] <= opt and res.weight <= 2 * opt


def test_exact_vc_examples():
    assert solve_exact_vc(star_graph(4))[1] == 1
    assert solve_exact_vc(cycle_graph(5))[1] == 2
    assert solve_exact_vc(path_graph(4, [10, 1, 1, 10]))[1] == 2
    with pytest.raises(InputError):
        solve_exact_vc(path_graph(4), cover=[0])
    with pytest.raises(ResourceError):
        solve_exact_vc(complete_graph(8), cover=range(8), cap=5)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 11), st.floats(0, 0.7), st.integers(0, 10**6))
def test_exact_vc_matches_oracle(n, p, seed):
    g = gen_random_weights(gen_random(n, p, seed), seed, 0, 6)
    sol, wt = solve_exact_vc(g)
    assert wt == brute_min_dominating(g).weight == g.weight(sol)


def test_find_modulator():
    assert len(find_modulator(complete_graph(5), 2)) == 2
    assert find_modulator(cycle_graph(7), 2) == []
    assert len(find_modulator(cycle_graph(7), 1)) == 1
    assert len(find_modulator(star_graph(5), 0)) == 1
    with pytest.raises(ResourceError):
        find_modulator(gen_random(21, 0.5, 1), 2)


def test_modulator_decomposition():
    g = complete_graph(5)
    td = modulator_decomposition(g, [0, 1], 2)
    assert verify(td, g) == [] and td.width == 4
    with pytest.raises(WidthExceeded):
        modulator_decomposition(g, [0], 2)
    assert decompose_bounded(complete_graph(3), 2).width == 2
