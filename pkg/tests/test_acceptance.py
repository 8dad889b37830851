"""Acceptance checks.  Each test prints one PASS/FAIL line and must finish within ten minutes."""

import math
import random
import time
from itertools import combinations, combinations_with_replacement

import networkx as nx
import numpy as np
import pytest

from domsetkit.approxk import TradeoffConfig, apex_graph, approx_tradeoff
from domsetkit.compress import (
    RdsInstance, compress, dangling_path_reduce, eliminate, induced_path_reduce, leaf_reduce,
    lift, path_dominate, rdsc_solve, replay, segment_reduce, wfree_path_reduce,
)
from domsetkit.decomp import balanced_partition, decompose_bounded, make_nice, verify
from domsetkit.errors import InputError
from domsetkit.dptw import approx2_tw, solve_exact_tw, solve_half_width
from domsetkit.fes import fes_modulator, is_cactus, solve_exact_fes
from domsetkit.graph import (
    cycle_graph, fes_number, gen_from_hitting_set, gen_from_set_cover, gen_random,
    is_dominating, path_graph,
)
from domsetkit.modulator import ModulatorInstance, approx2_twd, find_modulator, solve_exact_vc
from domsetkit.oracle import brute_min_dominating, brute_min_hitting_set, brute_min_set_cover, rds_brute_force
from domsetkit.setcover import SetCoverInstance, greedy_dominating_set, harmonic, solve_generalized

from corpus import connected_corpus, random_family, small_corpus
from test_compress import subdivided
from test_decomp import random_raw_decomposition

TIME_LIMIT = 600


@pytest.fixture(scope="module")
def corpus():
    return small_corpus()


@pytest.fixture(scope="module")
def optima(corpus):
    return [brute_min_dominating(g).weight for _, g in corpus]


@pytest.fixture
def report(capsys):
    start = time.time()

    def _report(num, failures, detail):
        elapsed = time.time() - start
        ok = not failures and elapsed < TIME_LIMIT
        with capsys.disabled():
            print("\nCRITERION %d: %s (%s, %.1fs)" % (num, "PASS" if ok else "FAIL", detail, elapsed))
        assert not failures, failures[:5]
        assert elapsed < TIME_LIMIT
    return _report


def weighted_count(corpus):
    return sum(1 for _, g in corpus if g.is_weighted())


# ------------------------------------------------------------------ 1: exact solvers

def test_criterion_1_exact_solvers(corpus, optima, report):
    assert len(corpus) >= 500 and weighted_count(corpus) >= 50
    failures = []
    for (name, g), opt in zip(corpus, optima):
        got = {
            "tw": solve_exact_tw(g).weight,
            "half-width": solve_half_width(g, d_set=range(g.n)).weight,
            "vc": solve_exact_vc(g)[1],
            "fes": solve_exact_fes(g)[1],
        }
        bad = {k: v for k, v in got.items() if v != opt}
        if bad:
            failures.append((name, opt, bad))
    report(1, failures, "%d graphs, %d weighted, 4 solvers equal brute force"
           % (len(corpus), weighted_count(corpus)))


# ------------------------------------------------------------------ 2: 2-approximations

def test_criterion_2_two_approximations(corpus, optima, report):
    failures = []
    for (name, g), opt in zip(corpus, optima):
        results = {"tw": approx2_tw(g), "twd": approx2_twd(ModulatorInstance(g, find_modulator(g, 2), 2))}
        for kind, res in results.items():
            cert = res.certificate
            ok = (is_dominating(g, res.solution) and res.weight == g.weight(res.solution)
                  and res.weight <= 2 * opt and cert["w1"] <= opt and cert["w2"] <= opt)
            if not ok:
                failures.append((name, kind, opt, res.weight, cert["w1"], cert["w2"]))
    report(2, failures, "%d graphs, weight <= 2 OPT and each half <= OPT" % len(corpus))


# ------------------------------------------------------------------ 3: feedback-edge modulator

def nx_graph(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def nx_is_cactus(h):
    for comp in nx.biconnected_component_edges(h):
        comp = list(comp)
        if len(comp) > 1 and len(comp) != len({v for e in comp for v in e}):
            return False
    return True


def edges_on_cycles(h):
    out = set()
    for comp in nx.biconnected_component_edges(h):
        comp = list(comp)
        if len(comp) > 1:
            out.update((min(e), max(e)) for e in comp)
    return out


def test_criterion_3_fes_modulator(report):
    rng = random.Random(3)
    failures, count = [], 0
    while count < 520:
        n = rng.randint(1, 40)
        p = rng.choice([0.05, 0.08, 0.1, 0.15, 0.2, 0.3])
        g = gen_random(n, p, seed=rng.randrange(10**9))
        count += 1
        res = fes_modulator(g)
        mod = res.modulator
        h = nx_graph(g)
        rest = h.copy()
        rest.remove_nodes_from(mod)
        if len(mod) > fes_number(g) // 2 or len(set(mod)) != len(mod):
            failures.append(("size", n, p, len(mod), fes_number(g)))
        if not (is_cactus(g.remove_vertices(mod)[0]) and nx_is_cactus(rest)):
            failures.append(("cactus", n, p))
        # recompute which non-tree edges stop lying on cycles after each removal
        f_edges = {(min(e), max(e)) for e in res.non_tree}
        assigned = set()
        cur = h.copy()
        active = edges_on_cycles(cur) & f_edges
        for v, logged in zip(mod, res.log):
            cur.remove_node(v)
            now = edges_on_cycles(cur) & f_edges
            lost = active - now
            active = now
            logged = {(min(e), max(e)) for e in logged}
            if logged != lost or len(lost) < 2 or lost & assigned:
                failures.append(("log", n, p, v, sorted(lost)))
            assigned |= lost
    report(3, failures, "%d random graphs with n <= 40" % count)


# ------------------------------------------------------------------ 4: kernel

def canonical_kernel(el):
    return (sorted(tuple(sorted(e)) for e in el.kernel),
            sorted(min(tuple(p), tuple(p[::-1])) for p in el.paths))


def test_criterion_4_kernel(corpus, report):
    graphs = [g for _, g in corpus] + connected_corpus(300)
    failures = []
    for i, g in enumerate(graphs):
        k = fes_number(g)
        fifo = eliminate(g, "fifo")
        lifo = eliminate(g, "lifo")
        if len(fifo.kernel_vertices) > 2 * k or len(fifo.kernel) > 3 * k:
            failures.append(("bound", i, k, len(fifo.kernel_vertices), len(fifo.kernel)))
        if canonical_kernel(fifo) != canonical_kernel(lifo):
            failures.append(("order", i))
    report(4, failures, "%d graphs, |V(H)| <= 2k, |E(H)| <= 3k, fifo == lifo" % len(graphs))


# ------------------------------------------------------------------ 5: compression

def test_criterion_5_compression(report):
    graphs = connected_corpus(320, max_n=18)
    failures = []
    for i, g in enumerate(graphs):
        k = g.m - g.n + 1
        comp = compress(g)
        inst = comp.instance
        high = [v for v in inst.adj if len(inst.adj[v]) > 2]
        if inst.m > 27 * k or inst.n > 26 * k or len(high) > 2 * k:
            failures.append(("bounds", i, k, inst.n, inst.m, len(high)))
        h, ids, exempt = inst.to_graph()
        rest = rds_brute_force(h, exempt)
        opt = brute_min_dominating(g).weight
        if len(comp.partial) + rest.weight != opt:
            failures.append(("total", i, len(comp.partial), rest.weight, opt))
        lifted = comp.lift({ids[v] for v in rest.witness})
        if not is_dominating(g, lifted) or len(lifted) != opt:
            failures.append(("lift", i))
    c12 = cycle_graph(12)
    comp = compress(c12)
    h, _, exempt = comp.instance.to_graph()
    c12_total = len(comp.partial) + rds_brute_force(h, exempt).weight
    if c12_total != 4:
        failures.append(("C12", c12_total))
    report(5, failures, "%d connected graphs with n <= 18, C12 total %d" % (len(graphs), c12_total))


# ------------------------------------------------------------------ 6: path and cycle rules

class LineBrute:
    """Every vertex subset of a small graph with its closed-neighborhood coverage."""

    def __init__(self, g):
        self.n = g.n
        subsets = np.arange(1 << g.n, dtype=np.int64)
        self.subsets = subsets
        self.size = np.zeros(len(subsets), dtype=np.int64)
        self.cov = np.zeros(len(subsets), dtype=np.int64)
        for v in range(g.n):
            has = (subsets >> v) & 1 == 1
            self.size += has
            closed = (1 << v) | sum(1 << u for u in g.adj[v])
            self.cov[has] |= closed

    def best(self, need_in, need_out, targets):
        ok = (((self.subsets & need_in) == need_in) & ((self.subsets & need_out) == 0)
              & ((self.cov & targets) == targets))
        return int(self.size[ok].min()) if ok.any() else None


def mask(vs):
    return sum(1 << v for v in vs)


def small_subsets(n, top=3):
    return [s for k in range(top + 1) for s in combinations(range(n), k)]


def check_rdsc_exhaustive(failures):
    graphs = [path_graph(n) for n in range(1, 11)] + [cycle_graph(n) for n in range(3, 11)]
    checked = 0
    for c in graphs:
        brute = LineBrute(c)
        full = (1 << c.n) - 1
        subs = small_subsets(c.n)
        for u in subs:
            for w in subs:
                if set(u) & set(w):
                    continue
                for t in range(c.n):
                    for case in (1, 2):
                        if case == 2 and t in u:
                            continue
                        if case == 1:
                            targets = full & ~mask(w)
                            want = brute.best(mask(u) | 1 << t, 0, targets)
                        else:
                            targets = full & ~mask(w) & ~(1 << t)
                            want = brute.best(mask(u), 1 << t, targets)
                        got = rdsc_solve(c, u, w, t, case)
                        checked += 1
                        ok = (want is not None and len(got) == want and set(u) <= got
                              and (t in got) == (case == 1)
                              and is_dominating(c, got, [v for v in range(c.n) if targets >> v & 1]))
                        if not ok:
                            failures.append(("rdsc", c.n, c.m, u, w, t, case, want, sorted(got)))
        if c.m == c.n - 1:
            for w in range(1 << c.n):
                ws = [v for v in range(c.n) if w >> v & 1]
                got = path_dominate(RdsInstance.from_graph(c, ws))
                want = brute.best(0, 0, full & ~w)
                checked += 1
                if len(got) != want or not is_dominating(c, got, [v for v in range(c.n) if v not in ws]):
                    failures.append(("path", c.n, ws, want, sorted(got)))
    return checked


def rds_opt(inst):
    h, _, exempt = inst.to_graph()
    return rds_brute_force(h, exempt)


def check_step(before, after, steps, delta):
    """The optimum drops by exactly ``delta`` and lifting an optimum of ``after`` stays optimal."""
    ob, oa = rds_opt(before), rds_opt(after)
    if ob.weight != oa.weight + delta:
        return False
    _, ids, _ = after.to_graph()
    lifted = lift(steps, {ids[v] for v in oa.witness})
    return before.is_solution(lifted) and len(lifted) == ob.weight


def find_paths(inst):
    """Maximal paths through degree-two vertices, with their end points."""
    out = []
    for v in inst.adj:
        if len(inst.adj[v]) != 2:
            for first in inst.adj[v]:
                path, prev, cur = [v], v, first
                while len(inst.adj[cur]) == 2 and cur != v:
                    path.append(cur)
                    prev, cur = cur, next(u for u in inst.adj[cur] if u != prev)
                path.append(cur)
                out.append(path)
    return out


def count_direct(seen, failures, label, before, after, trace, seed):
    seen[label] = seen.get(label, 0) + 1
    if not check_step(before, after, trace, sum(st.delta for st in trace)):
        failures.append((label, seed))


def check_single_rules(failures):
    rules_seen = {}
    rng = random.Random(6)
    for seed in range(400):
        g = subdivided(rng, rng.randint(2, 4), 7)
        if g.n > 14 or g.n == 0:
            continue
        exempt = [v for v in range(g.n) if rng.random() < 0.3]
        inst = RdsInstance.from_graph(g, exempt)
        # the whole rule loop, step by step
        _, trace = induced_path_reduce(inst)
        for i, step in enumerate(trace):
            rules_seen[step.rule] = rules_seen.get(step.rule, 0) + 1
            before = replay(g, trace[:i], exempt)
            after = replay(g, trace[:i + 1], exempt)
            if not check_step(before, after, trace[i:i + 1], step.delta):
                failures.append(("loop", seed, i, step.rule))
        # each public rule called directly wherever it applies
        for v in list(inst.adj):
            if len(inst.adj[v]) <= 1:
                trace = []
                after, _ = leaf_reduce(inst, v, trace)
                count_direct(rules_seen, failures, "direct-leaf", inst, after, trace, seed)
        for path in find_paths(inst):
            if len(inst.adj[path[0]]) == 1 and len(path) >= 3:
                trace = []
                try:
                    after, _ = dangling_path_reduce(inst, path, trace)
                except InputError:
                    continue
                count_direct(rules_seen, failures, "direct-dangling", inst, after, trace, seed)
            for size in (5, 6, 7):
                for i in range(len(path) - size + 1):
                    for win in (path[i:i + size], path[i:i + size][::-1]):
                        calls = [(segment_reduce, "direct-segment")]
                        if size == 5:
                            calls.append((wfree_path_reduce, "direct-wfree"))
                        for fn, label in calls:
                            trace = []
                            try:
                                after = fn(inst, win, trace)
                            except InputError:
                                continue
                            count_direct(rules_seen, failures, label, inst, after, trace, seed)
    return rules_seen


def test_criterion_6_paths_cycles_and_rules(report):
    failures = []
    checked = check_rdsc_exhaustive(failures)
    seen = check_single_rules(failures)
    for rule in ("leaf", "wfree", "b1", "b2", "b3", "direct-leaf", "direct-dangling", "direct-wfree",
                 "direct-segment"):
        if not seen.get(rule):
            failures.append(("rule never exercised", rule))
    report(6, failures, "%d constrained path/cycle instances, rule applications %s"
           % (checked, dict(sorted(seen.items()))))


# ------------------------------------------------------------------ 7: generalized set cover

def test_criterion_7_generalized_set_cover(report):
    rng = random.Random(7)
    failures, checked = [], 0
    for trial in range(240):
        u = 1 + trial % 8
        m = rng.randint(1, 12)
        fam = random_family(rng, u, m)
        weights = [rng.randint(0, 5) for _ in fam] if trial % 3 else None
        table = solve_generalized(SetCoverInstance(u, fam, weights))
        for a in range(1 << u):
            target = [e for e in range(u) if a >> e & 1]
            want = brute_min_set_cover(u, fam, weights, target).weight
            got = table.weight(a)
            checked += 1
            if got != want:
                failures.append(("value", trial, a, got, want))
                continue
            sub = table.subfamily(a)
            if sub is not None:
                covered = set().union(*[set(fam[j]) for j in sub]) if sub else set()
                w = weights or [1] * len(fam)
                if not set(target) <= covered or sum(w[j] for j in sub) != got:
                    failures.append(("witness", trial, a))
            for e in range(u):
                if not a >> e & 1 and table.weight(a | 1 << e) < got:
                    failures.append(("monotone", trial, a, e))
    report(7, failures, "%d (instance, A) pairs with |U| <= 8 and m <= 12" % checked)


# ------------------------------------------------------------------ 8: approximation trade-off

def test_criterion_8_tradeoff(report):
    rng = random.Random(8)
    failures, checked, bounded = [], 0, 0
    for trial in range(400):
        n = rng.randint(1, 12)
        g = gen_random(n, rng.choice([0.1, 0.2, 0.3, 0.5]), seed=trial)
        opt_res = brute_min_dominating(g)
        opt = opt_res.weight
        for alpha in ("0", "1/3", "1/2", "2/3"):
            for k in range(0, 7):
                cfg = TradeoffConfig(alpha, k)
                sol, size, _ = approx_tradeoff(g, cfg)
                checked += 1
                if not is_dominating(g, sol) or size != len(sol):
                    failures.append(("dominating", trial, alpha, k))
                if opt <= math.floor(cfg.alpha * k) + 1:
                    bounded += 1
                    h, _ = apex_graph(g, sorted(opt_res.witness))
                    delta = max(len(h.adj[v]) + 1 for v in range(h.n))
                    if size > opt + harmonic(delta):
                        failures.append(("bound", trial, alpha, k, size, opt))
                if cfg.alpha == 0 and k >= opt and size > len(greedy_dominating_set(g)[0]):
                    failures.append(("greedy", trial, k))
    report(8, failures, "%d runs, %d with OPT within the guess" % (checked, bounded))


# ------------------------------------------------------------------ 9: reduction gadgets

def test_criterion_9_gadgets(report):
    failures, checked, skipped = [], 0, 0
    for u in range(1, 5):
        members = [s for k in range(1, u + 1) for s in combinations(range(u), k)]
        for m in range(1, 5):
            for fam in combinations_with_replacement(members, m):
                fam = [list(s) for s in fam]
                ds_hit = brute_min_dominating(gen_from_hitting_set(u, fam)).weight
                if ds_hit != brute_min_hitting_set(u, fam).weight + 1:
                    failures.append(("hitting", u, fam))
                checked += 1
                cover = brute_min_set_cover(u, fam)
                if not cover.feasible:
                    skipped += 1
                    continue
                if brute_min_dominating(gen_from_set_cover(u, fam)).weight != cover.weight + 1:
                    failures.append(("cover", u, fam))
                checked += 1
    report(9, failures, "%d gadget instances, %d uncoverable families skipped" % (checked, skipped))


# ------------------------------------------------------------------ 10: decompositions

def test_criterion_10_decompositions(corpus, report):
    failures, tds = [], 0
    for name, g in corpus:
        td = decompose_bounded(g, max(g.n, 3))
        tds += 1
        if verify(td, g):
            failures.append(("verify", name))
            continue
        part = balanced_partition(g, td)
        bound = math.ceil(max(td.width, 0) / 2) + part.slack
        if part.v1 & part.v2 or part.v1 | part.v2 != set(range(g.n)) or part.bound != bound:
            failures.append(("partition", name))
        for bag in td.bag:
            if len(set(bag) & part.v1) > bound or len(set(bag) & part.v2) > bound:
                failures.append(("partition bound", name))
                break
        mod = find_modulator(g, 2)
        tdm = decompose_bounded(g.remove_vertices(mod)[0], 2)
        tds += 1
        if verify(tdm):
            failures.append(("modulator td", name))
    rng = random.Random(10)
    for seed in range(300):
        raw = random_raw_decomposition(rng, rng.randint(1, 10))
        nice = make_nice(raw)
        tds += 1
        if verify(raw) or verify(nice) or nice.width != raw.width:
            failures.append(("make_nice", seed, raw.width, nice.width))
    report(10, failures, "%d decompositions verified, partitions within bound" % tds)
