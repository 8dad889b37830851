"""Cactus modulators from a DFS tree, and the exact solver built on them.

The scan removes at most fes/2 vertices and leaves a cactus.  Each removal
takes at least two non-tree edges off every cycle, which the deactivation
log records for auditing.
"""

from dataclasses import dataclass, field

from .decomp import add_to_all_bags, decompose_bounded, relabel
from .dptw import solve_exact_tw
from .errors import ResourceError
from .graph import biconnected_components, dfs_forest, require_simple

FES_MODULATOR_CAP = 25


@dataclass
class FesModulatorResult:
    modulator: list                 # removed vertices in removal order
    non_tree: list                  # F as (top, bottom) pairs
    parent: list
    order: list                     # preorder actually traversed
    reasons: list = field(default_factory=list)
    log: list = field(default_factory=list)

    @property
    def M(self):
        return frozenset(self.modulator)

    def to_json(self):
        return {
            "modulator": list(self.modulator),
            "non_tree_edges": [list(e) for e in self.non_tree],
            "removals": [
                {"vertex": v, "reason": r, "deactivated": [list(e) for e in d]}
                for v, r, d in zip(self.modulator, self.reasons, self.log)
            ],
        }


def is_cactus(g):
    """True iff every block is a single edge or a single cycle."""
    for block in biconnected_components(g):
        if len(block) == 1:
            continue
        verts = set()
        for i in block:
            verts.update(g.edges[i])
        if len(verts) != len(block):
            return False
    return True


def _subtree_sizes(parent, order):
    size = [1] * len(parent)
    for v in reversed(order):
        if parent[v] >= 0:
            size[parent[v]] += size[v]
    return size


def fes_modulator(g):
    """Preorder scan of a DFS tree tracking one open non-tree edge ``e``.

    A vertex goes into M when it is the top of two non-tree edges, or the top
    of one while ``e`` is open.  When ``e`` is set, the traversal first walks
    the tree path down to its bottom.  ``e`` is cleared at every component
    root.
    """
    require_simple(g)
    n = g.n
    parent, base_order, depth, tree = dfs_forest(g)
    pos = {v: i for i, v in enumerate(base_order)}
    size = _subtree_sizes(parent, base_order)
    children = [[] for _ in range(n)]
    for v in range(n):
        if parent[v] >= 0:
            children[parent[v]].append(v)

    non_tree = []
    tops = [[] for _ in range(n)]
    for i, (u, v) in enumerate(g.edges):
        if i in tree:
            continue
        t, b = (u, v) if depth[u] < depth[v] else (v, u)
        assert depth[b] - depth[t] >= 2, "a back edge spans at least two tree edges"
        tops[t].append(len(non_tree))
        non_tree.append((t, b))

    def below(a, b):
        return pos[a] < pos[b] < pos[a] + size[a]

    modulator, reasons, order = [], [], []
    for root in base_order:
        if parent[root] != -1:
            continue
        e = None
        target = None
        stack = [root]
        while stack:
            v = stack.pop()
            order.append(v)
            if e is not None and non_tree[e][1] == v:
                e = None
            if tops[v]:
                if len(tops[v]) >= 2 or e is not None:
                    modulator.append(v)
                    reasons.append("two-tops" if len(tops[v]) >= 2 else "open-edge")
                    e = None
                else:
                    e = tops[v][0]
                    target = non_tree[e][1]
            kids = list(children[v])
            if target is not None and below(v, target):
                x = target
                while parent[x] != v:
                    x = parent[x]
                kids.remove(x)
                kids.insert(0, x)
            stack.extend(reversed(kids))

    res = FesModulatorResult(modulator, non_tree, parent, order, reasons)
    res.log = deactivation_log(g, res)
    return res


def active_edges(g, removed, edges):
    """Those of ``edges`` that lie on a cycle of g - removed."""
    rest, ids = g.remove_vertices(removed)
    index = {v: i for i, v in enumerate(ids)}
    on_cycle = set()
    for block in biconnected_components(rest):
        if len(block) > 1:
            for i in block:
                u, v = rest.edges[i]
                on_cycle.add((ids[u], ids[v]))
    out = []
    for t, b in edges:
        if t in index and b in index and (min(t, b), max(t, b)) in on_cycle:
            out.append((t, b))
    return out


def deactivation_log(g, res):
    """For each removal, the non-tree edges that stop lying on a cycle."""
    log = []
    prev = set(active_edges(g, [], res.non_tree))
    for i in range(len(res.modulator)):
        cur = set(active_edges(g, res.modulator[:i + 1], res.non_tree))
        log.append(sorted(prev - cur))
        prev = cur
    return log


def solve_exact_fes(g, w=None, cap=FES_MODULATOR_CAP):
    """Exact weighted domination on a decomposition of width at most |M| + 2."""
    require_simple(g)
    res = fes_modulator(g)
    mod = sorted(res.modulator)
    if len(mod) > cap:
        raise ResourceError("|M|", len(mod), cap)
    rest, ids = g.remove_vertices(mod)
    td = add_to_all_bags(relabel(decompose_bounded(rest, 2), ids), mod)
    td.meta["modulator"] = mod
    out = solve_exact_tw(g, w, td)
    return out.solution, out.weight
