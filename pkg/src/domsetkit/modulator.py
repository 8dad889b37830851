"""Solvers parameterized by a modulator to bounded treewidth.

A modulator ``M`` is a vertex set whose removal leaves treewidth at most
``d``; ``d = 0`` makes ``M`` a vertex cover.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .decomp import add_to_all_bags, decompose_bounded, relabel
from .dptw import ApproxResult, solve_exact_tw
from .errors import InputError, ResourceError, WidthExceeded
from .graph import INF, Graph, from_mask, is_dominating, min_vertex_cover, require_simple, to_mask
from .setcover import SetCoverInstance, solve_generalized

MODULATOR_CAP = 25
SEARCH_CAP = 20


@dataclass
class ModulatorInstance:
    graph: Graph
    modulator: tuple
    d: int = 2
    weights: Optional[list] = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self.modulator = tuple(sorted(set(self.modulator)))
        self.graph.check_vertices(self.modulator)
        if self.weights is None:
            self.weights = list(self.graph.weights)

    def weight(self, vertices):
        return sum(self.weights[v] for v in vertices)


class ModulatorTable:
    """For every subset A of M a minimum-weight vertex set dominating A.

    Subsets are bitmasks over the positions of the sorted modulator.
    """

    def __init__(self, modulator, reps, table):
        self.modulator = modulator
        self.reps = reps
        self.table = table

    def mask_of(self, vertices):
        pos = {v: i for i, v in enumerate(self.modulator)}
        m = 0
        for v in vertices:
            m |= 1 << pos[v]
        return m

    def weight(self, a):
        return self.table.weight(a)

    def solution(self, a):
        fam = self.table.subfamily(a)
        if fam is None:
            return None
        return frozenset(self.reps[j] for j in fam)

    def lookup(self, vertices):
        a = self.mask_of(vertices)
        return self.solution(a), self.weight(a)


def solve_generalized_modulator(inst, cap=MODULATOR_CAP):
    """Dominators of every subset of M via set cover over {N[v] & M}.

    Sets with equal trace on M are merged, keeping the lightest vertex
    (smallest id on ties) as representative.
    """
    g, mod = inst.graph, inst.modulator
    if len(mod) > cap:
        raise ResourceError("|M|", len(mod), cap)
    pos = {v: i for i, v in enumerate(mod)}
    best = {}
    for v in range(g.n):
        trace = 0
        for u in g.closed_neighborhood(v):
            if u in pos:
                trace |= 1 << pos[u]
        if trace == 0:
            continue
        cur = best.get(trace)
        if cur is None or (inst.weights[v], v) < (inst.weights[cur], cur):
            best[trace] = v
    traces = sorted(best)
    reps = [best[t] for t in traces]
    sc = SetCoverInstance(len(mod), [from_mask(t) for t in traces], [inst.weights[v] for v in reps])
    return ModulatorTable(mod, reps, solve_generalized(sc, cap))


def gadget_graph(g, weights, modulator, subset):
    """(G - M) plus a vertex x joined to N(L) - M, with w(x) = w(L).

    Returns ``(graph, ids)`` where ``ids[i]`` is the original id of vertex i
    and x is the last vertex (id ``None`` in ``ids``).
    """
    rest, ids = g.remove_vertices(modulator)
    index = {v: i for i, v in enumerate(ids)}
    mset = set(modulator)
    attach = sorted({index[u] for v in subset for u in g.neighbors(v) if u not in mset})
    x = rest.n
    edges = list(rest.edges) + [(u, x) for u in attach]
    w = [weights[v] for v in ids] + [sum(weights[v] for v in subset)]
    return Graph(rest.n + 1, edges, w), ids + [None]


def _base_decomposition(inst):
    rest, ids = inst.graph.remove_vertices(inst.modulator)
    td = decompose_bounded(rest, inst.d)
    return rest, ids, td


def solve_decomposition_domination(inst, cap=MODULATOR_CAP):
    """Minimum-weight set dominating V - M.

    For each L subset of M the gadget graph is solved exactly on the
    decomposition of G - M with x added to every bag; a solution S' lifts to
    S' when x is unused and to (S' - x) + L otherwise.
    """
    g, mod = inst.graph, inst.modulator
    if len(mod) > cap:
        raise ResourceError("|M|", len(mod), cap)
    targets = [v for v in range(g.n) if v not in set(mod)]
    if not targets:
        return frozenset(), 0
    rest, ids, td = _base_decomposition(inst)
    x = rest.n
    td_x = add_to_all_bags(td, [x])
    best = None
    for k in range(len(mod) + 1):
        for subset in combinations(mod, k):
            gl, _ = gadget_graph(g, inst.weights, mod, subset)
            res = solve_exact_tw(gl, None, td_x)
            if x in res.solution:
                sol = frozenset(ids[v] for v in res.solution if v != x) | frozenset(subset)
            else:
                sol = frozenset(ids[v] for v in res.solution)
            wt = inst.weight(sol)
            if best is None or (wt, sorted(sol)) < (best[1], sorted(best[0])):
                best = (sol, wt)
    assert is_dominating(g, best[0], targets)
    return best


def approx2_twd(inst):
    """2-approximation: optimal dominator of M united with optimal dominator of V - M."""
    require_simple(inst.graph)
    table = solve_generalized_modulator(inst)
    full = (1 << len(inst.modulator)) - 1
    s1 = table.solution(full) if inst.modulator else frozenset()
    w1 = table.weight(full) if inst.modulator else 0
    s2, w2 = solve_decomposition_domination(inst)
    sol = frozenset(s1) | s2
    assert is_dominating(inst.graph, sol)
    cert = {"w1": w1, "w2": w2, "s1": sorted(s1), "s2": sorted(s2),
            "modulator": list(inst.modulator), "d": inst.d, "lower_bound": max(w1, w2)}
    return ApproxResult(sol, inst.weight(sol), cert)


def solve_exact_vc(g, w=None, cover=None, cap=MODULATOR_CAP):
    """Exact weighted domination via a vertex cover M.

    For each A subset of M, vertices outside M with no neighbor in A must be
    in the solution; what is left undominated of M is completed from the
    modulator table.  The best of the 2^|M| candidates is optimal.
    """
    require_simple(g)
    weights = list(g.weights if w is None else w)
    if cover is None:
        cover = min_vertex_cover(g, cap)
        if cover is None:
            raise ResourceError("vertex cover", "> %d" % cap, cap)
    cover = sorted(set(cover))
    if len(cover) > cap:
        raise ResourceError("|cover|", len(cover), cap)
    mset = set(cover)
    for u, v in g.edges:
        if u not in mset and v not in mset:
            raise InputError("the given set is not a vertex cover")
    inst = ModulatorInstance(g, cover, 0, weights)
    table = solve_generalized_modulator(inst)
    indep = [v for v in range(g.n) if v not in mset]
    best = None
    for k in range(len(cover) + 1):
        for a in combinations(cover, k):
            amask = to_mask(a)
            forced = [v for v in indep if not g.nbr_mask[v] & amask]
            s_hat = set(a) | set(forced)
            dom = 0
            for v in s_hat:
                dom |= g.closed_mask[v]
            left = [u for u in cover if not dom >> u & 1]
            extra, ew = table.lookup(left)
            if extra is None or ew >= INF:
                continue
            sol = frozenset(s_hat) | extra
            wt = sum(weights[v] for v in sol)
            if best is None or (wt, sorted(sol)) < (best[1], sorted(best[0])):
                best = (sol, wt)
    assert is_dominating(g, best[0])
    return best


def find_modulator(g, d, search_cap=SEARCH_CAP):
    """A small set M with tw(G - M) <= d.

    d = 0 uses a minimum vertex cover; for d >= 1 an exhaustive search by
    increasing size is run when n <= search_cap, otherwise the caller must
    supply M.
    """
    if d == 0:
        return sorted(min_vertex_cover(g))
    if g.n > search_cap:
        raise ResourceError("n for modulator search", g.n, search_cap)
    for k in range(g.n + 1):
        for cand in combinations(range(g.n), k):
            rest, _ = g.remove_vertices(cand)
            try:
                td = decompose_bounded(rest, d)
            except WidthExceeded:
                continue
            if td.width <= d:
                return list(cand)
    return list(range(g.n))


def modulator_decomposition(g, modulator, d):
    """Nice decomposition of g: one of G - M with M added to every bag."""
    rest, ids = g.remove_vertices(modulator)
    td = decompose_bounded(rest, d)
    return add_to_all_bags(relabel(td, ids), modulator)
