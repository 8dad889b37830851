"""Dynamic programs over nice tree decompositions for weighted domination.

The central routine solves a "half-domination" problem: given a target set
``D``, find a minimum-weight ``S`` dominating ``D`` (vertices outside ``D`` may
stay undominated).  Per bag vertex the state is

* vertices of ``D``:  IN (in S), NEED (not in S, must be dominated inside the
  subtree) or FREE (not in S, no requirement yet);
* other vertices:     IN or FREE.

The entry for a node ``x`` and a state is the minimum weight of ``S`` within
the vertices below ``x`` that agrees with the IN positions on the bag and
dominates every forgotten ``D`` vertex plus the NEED positions.
"""

import itertools
from dataclasses import dataclass, field

from .decomp import FORGET, INTRODUCE, JOIN, LEAF, NiceTreeDecomposition, decompose_bounded, require_valid
from .decomp import balanced_partition
from .errors import InputError
from .graph import INF, is_dominating, popcount, require_simple

IN, NEED, FREE = 0, 1, 2

# join groups with more than this many undecided D-vertices use the subset
# convolution; small groups are faster with plain enumeration
CONVOLUTION_THRESHOLD = 8


def _add(a, b):
    if a >= INF or b >= INF:
        return INF
    s = a + b
    return INF if s >= INF else s


def bag_states(bag, dset):
    return itertools.product(*[(IN, NEED, FREE) if v in dset else (IN, FREE) for v in bag])


def table_size_bound(bag, dset):
    d = sum(1 for v in bag if v in dset)
    return 2 ** (len(bag) - d) * 3 ** d


def introduce_table(g, bag, v, child, cost, dset):
    p = bag.index(v)
    nbr = g.nbr_mask[v]
    adj = [bool(nbr >> u & 1) for u in bag]
    out = {}
    for s in bag_states(bag, dset):
        cv = s[p]
        rest = s[:p] + s[p + 1:]
        if cv == IN:
            key = tuple(FREE if (c == NEED and adj[i]) else c for i, c in enumerate(s) if i != p)
            out[s] = _add(child[key], cost[v])
        elif cv == FREE:
            out[s] = child[rest]
        elif any(c == IN and adj[i] for i, c in enumerate(s)):
            out[s] = child[rest]
        else:
            out[s] = INF
    return out


def forget_table(bag, v, child, dset):
    """``bag`` is the parent bag; the child bag is ``bag`` plus ``v``."""
    cbag = tuple(sorted(bag + (v,)))
    p = cbag.index(v)
    alt = NEED if v in dset else FREE
    out = {}
    for s in bag_states(bag, dset):
        a = child[s[:p] + (IN,) + s[p:]]
        b = child[s[:p] + (alt,) + s[p:]]
        out[s] = a if a < b else b
    return out


def _naive_group(fy, fz, r):
    size = 1 << r
    h = [INF] * size
    for a in range(size):
        best = INF
        b = a
        while True:
            x = fy[b]
            if x < INF:
                y = fz[a ^ b]
                if y < INF and x + y < best:
                    best = x + y
            if b == 0:
                break
            b = (b - 1) & a
        h[a] = best
    return h


def min_plus_subset_convolution(f, g, r):
    """h[A] = min over B subset of A of f[B] + g[A - B], for natural values.

    Uses the ranked zeta/Moebius transform (fast subset convolution) over
    polynomials in a formal variable z, where a value x is encoded as the
    monomial z**x.  Polynomials are packed into Python integers with ``r + 2``
    bits per coefficient, which is enough because no coefficient of the result
    exceeds 2**r.  The smallest exponent with a non-zero coefficient is the
    min-plus answer.
    """
    size = 1 << r
    ff = [x for x in f if x < INF]
    gg = [x for x in g if x < INF]
    if not ff or not gg:
        return [INF] * size
    fmin, gmin = min(ff), min(gg)
    bits = r + 2
    rank = [popcount(a) for a in range(size)]

    def ranked(vals, base):
        tab = [[0] * size for _ in range(r + 1)]
        for a, x in enumerate(vals):
            if x < INF:
                tab[rank[a]][a] = 1 << (bits * (x - base))
        for row in tab:
            for i in range(r):
                bit = 1 << i
                for a in range(size):
                    if a & bit:
                        row[a] += row[a ^ bit]
        return tab

    fz = ranked(f, fmin)
    gz = ranked(g, gmin)
    h = [INF] * size
    for k in range(r + 1):
        row = [sum(fz[j][a] * gz[k - j][a] for j in range(k + 1)) for a in range(size)]
        for i in range(r):
            bit = 1 << i
            for a in range(size):
                if a & bit:
                    row[a] -= row[a ^ bit]
        for a in range(size):
            if rank[a] == k and row[a]:
                low = (row[a] & -row[a]).bit_length() - 1
                h[a] = low // bits + fmin + gmin
    return h


def _join(bag, dset, ytab, ztab, cost, method):
    dpos = [i for i, v in enumerate(bag) if v in dset]
    out = {}
    k = len(bag)
    for xmask in range(1 << k):
        base = [IN if xmask >> i & 1 else FREE for i in range(k)]
        rpos = [i for i in dpos if not xmask >> i & 1]
        r = len(rpos)
        cx = sum(cost[bag[i]] for i in range(k) if xmask >> i & 1)
        states = []
        for a in range(1 << r):
            s = list(base)
            for j, i in enumerate(rpos):
                if a >> j & 1:
                    s[i] = NEED
            states.append(tuple(s))
        fy = [ytab[s] for s in states]
        fz = [ztab[s] for s in states]
        use_conv = method == "convolution" or (method == "auto" and r > CONVOLUTION_THRESHOLD)
        h = min_plus_subset_convolution(fy, fz, r) if use_conv else _naive_group(fy, fz, r)
        for a, s in enumerate(states):
            out[s] = INF if h[a] >= INF else h[a] - cx
    return out


def join_naive(bag, dset, ytab, ztab, cost):
    """Join by enumerating every split of the NEED positions between the children."""
    return _join(tuple(bag), dset, ytab, ztab, cost, "naive")


def join_convolution(bag, dset, ytab, ztab, cost):
    """Join through min-plus fast subset convolution; same table as :func:`join_naive`."""
    return _join(tuple(bag), dset, ytab, ztab, cost, "convolution")


@dataclass
class DPResult:
    solution: frozenset
    weight: int
    stats: dict = field(default_factory=dict)


def _check_td(g, td):
    if not isinstance(td, NiceTreeDecomposition):
        raise InputError("a nice tree decomposition is required")
    require_valid(td, g)


def run_tables(g, td, dset, cost, join="auto"):
    """Fill the table of every node bottom-up; returns a dict node -> table."""
    tables = {}
    max_size = 0
    for x in td.postorder():
        kind, bag = td.kind[x], td.bag[x]
        if kind == LEAF:
            tab = {(): 0}
        elif kind == INTRODUCE:
            tab = introduce_table(g, bag, td.vertex[x], tables[td.children[x][0]], cost, dset)
        elif kind == FORGET:
            tab = forget_table(bag, td.vertex[x], tables[td.children[x][0]], dset)
        else:
            y, z = td.children[x]
            tab = _join(bag, dset, tables[y], tables[z], cost, join)
        tables[x] = tab
        max_size = max(max_size, len(tab))
    return tables, max_size


def _backtrack(g, td, dset, cost, tables):
    chosen = set()
    stack = [(td.root, ())]
    while stack:
        x, s = stack.pop()
        kind, bag = td.kind[x], td.bag[x]
        if kind == LEAF:
            continue
        val = tables[x][s]
        if kind == INTRODUCE:
            v = td.vertex[x]
            p = bag.index(v)
            c = td.children[x][0]
            if s[p] == IN:
                chosen.add(v)
                nbr = g.nbr_mask[v]
                key = tuple(FREE if (code == NEED and nbr >> bag[i] & 1) else code
                            for i, code in enumerate(s) if i != p)
            else:
                key = s[:p] + s[p + 1:]
            stack.append((c, key))
        elif kind == FORGET:
            v = td.vertex[x]
            c = td.children[x][0]
            cbag = td.bag[c]
            p = cbag.index(v)
            alt = NEED if v in dset else FREE
            out = s[:p] + (alt,) + s[p:]
            if tables[c][out] != val:
                out = s[:p] + (IN,) + s[p:]
            stack.append((c, out))
        else:
            y, z = td.children[x]
            need = [i for i, code in enumerate(s) if code == NEED]
            cx = sum(cost[bag[i]] for i, code in enumerate(s) if code == IN)
            for a in range(1 << len(need)):
                ys, zs = list(s), list(s)
                for j, i in enumerate(need):
                    if a >> j & 1:
                        zs[i] = FREE
                    else:
                        ys[i] = FREE
                ys, zs = tuple(ys), tuple(zs)
                if _add(tables[y][ys], tables[z][zs]) - cx == val:
                    stack.append((y, ys))
                    stack.append((z, zs))
                    break
            else:
                raise AssertionError("join backtracking found no split")
    return frozenset(chosen)


def solve_half_width(g, w=None, td=None, d_set=None, join="auto"):
    """Minimum-weight set dominating ``d_set`` (all vertices when None)."""
    require_simple(g)
    cost = list(g.weights if w is None else w)
    if td is None:
        td = decompose_bounded(g, max(g.n, 3))
    _check_td(g, td)
    dset = frozenset(range(g.n) if d_set is None else d_set)
    g.check_vertices(dset)
    if not dset:
        return DPResult(frozenset(), 0, {"width": td.width})
    tables, max_size = run_tables(g, td, dset, cost, join)
    weight = tables[td.root][()]
    if weight >= INF:
        raise AssertionError("every target is dominated by itself, so a solution exists")
    sol = _backtrack(g, td, dset, cost, tables)
    assert sum(cost[v] for v in sol) == weight
    assert is_dominating(g, sol, dset)
    return DPResult(sol, weight, {"width": td.width, "max_table": max_size, "nodes": len(td)})


def solve_exact_tw(g, w=None, td=None, join="auto"):
    """Minimum-weight dominating set: the half-width DP with D = V(g)."""
    return solve_half_width(g, w, td, None, join)


@dataclass
class ApproxResult:
    solution: frozenset
    weight: int
    certificate: dict


def approx2_tw(g, w=None, td=None):
    """2-approximation: optimal dominators of the two sides of a balanced partition.

    Each side's optimum is at most OPT because any dominating set dominates
    that side, so the union weighs at most 2 OPT.
    """
    require_simple(g)
    cost = list(g.weights if w is None else w)
    if td is None:
        td = decompose_bounded(g, max(g.n, 3))
    _check_td(g, td)
    part = balanced_partition(g, td)
    r1 = solve_half_width(g, cost, td, part.v1)
    r2 = solve_half_width(g, cost, td, part.v2)
    sol = r1.solution | r2.solution
    assert is_dominating(g, sol)
    cert = {
        "w1": r1.weight,
        "w2": r2.weight,
        "s1": sorted(r1.solution),
        "s2": sorted(r2.solution),
        "slack": part.slack,
        "bag_bound": part.bound,
        "width": td.width,
        "lower_bound": max(r1.weight, r2.weight),
    }
    return ApproxResult(sol, sum(cost[v] for v in sol), cert)
