"""Compression of unweighted dominating set to a small relaxed instance.

A relaxed instance ``{G, W}`` asks for a smallest set dominating every vertex
outside the exempt set ``W``.  The pipeline

1. splits the graph into a kernel (the paths between vertices that survive
   the degree-at-most-2 elimination) and a forest of cacti hanging off it,
2. dominates every cactus optimally and marks what it dominates as exempt,
3. shrinks the remaining kernel with local rules until every induced path
   has at most 9 edges.

Every rule appends a :class:`Step` to a trace.  Replaying the trace on the
input reproduces the compressed instance, and :func:`lift` walks it backwards
to turn a solution of the compressed instance into a dominating set of the
input.  Lifting repairs the solution locally around each rule, which is
needed because a plain "add this vertex back" lift is not always enough
(see ``wfree_path_reduce``).
"""

import itertools
import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .errors import InputError
from .fes import is_cactus
from .graph import Graph, dfs_forest, fes_number, is_dominating, require_simple
from .oracle import rds_brute_force


# ------------------------------------------------------------------ instances

class RdsInstance:
    """Mutable relaxed instance over arbitrary vertex ids."""

    def __init__(self, adj=None, exempt=()):
        self.adj = {v: set(nb) for v, nb in (adj or {}).items()}
        self.exempt = set(exempt)
        for v in self.exempt:
            if v not in self.adj:
                raise InputError("exempt vertex %r is not in the graph" % (v,))

    @classmethod
    def from_graph(cls, g, exempt=()):
        require_simple(g)
        return cls({v: set(g.adj[v]) for v in range(g.n)}, exempt)

    def copy(self):
        return RdsInstance(self.adj, self.exempt)

    @property
    def n(self):
        return len(self.adj)

    @property
    def m(self):
        return sum(len(nb) for nb in self.adj.values()) // 2

    def vertices(self):
        return sorted(self.adj)

    def edges(self):
        return sorted((u, v) for u in self.adj for v in self.adj[u] if u < v)

    def degree(self, v):
        return len(self.adj[v])

    def high_degree(self):
        return [v for v in self.adj if len(self.adj[v]) > 2]

    def to_graph(self):
        """``(graph, ids, exempt)`` with dense ids; ``ids[i]`` is the original id."""
        ids = self.vertices()
        index = {v: i for i, v in enumerate(ids)}
        g = Graph(len(ids), [(index[u], index[v]) for u, v in self.edges()])
        return g, ids, sorted(index[v] for v in self.exempt)

    def is_solution(self, s):
        s = set(s)
        for v in self.adj:
            if v not in self.exempt and v not in s and not self.adj[v] & s:
                return False
        return True

    def __eq__(self, other):
        return isinstance(other, RdsInstance) and self.adj == other.adj and self.exempt == other.exempt

    def __repr__(self):
        return "RdsInstance(n=%d, m=%d, |W|=%d)" % (self.n, self.m, len(self.exempt))


def rds_brute(inst):
    """Smallest set dominating the non-exempt vertices, by enumeration."""
    g, ids, exempt = inst.to_graph()
    res = rds_brute_force(g, exempt)
    return frozenset(ids[v] for v in res.witness)


# ------------------------------------------------------------------ trace

@dataclass
class Step:
    """One rule application.

    ``take`` is a fixed set added to the solution when lifting.  Otherwise
    the lift re-chooses the solution inside ``zone`` so that every vertex in
    ``local`` (recorded with its neighbors and exemption before the rule) is
    dominated, using at most ``delta`` extra vertices.  ``placeholder`` lists
    ``delta`` removed vertices that make up the partial solution.
    """

    rule: str
    removed: tuple = ()
    removed_edges: tuple = ()
    added_edges: tuple = ()
    w_added: tuple = ()
    delta: int = 0
    placeholder: tuple = ()
    take: Optional[tuple] = None
    zone: tuple = ()
    local: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "rule": self.rule, "removed": list(self.removed),
            "removed_edges": [list(e) for e in self.removed_edges],
            "added_edges": [list(e) for e in self.added_edges],
            "w_added": list(self.w_added), "delta": self.delta,
            "placeholder": list(self.placeholder),
            "take": None if self.take is None else list(self.take),
            "zone": list(self.zone),
            "local": {str(v): [list(nb), ex] for v, (nb, ex) in sorted(self.local.items())},
        }

    @classmethod
    def from_json(cls, d):
        return cls(
            d["rule"], tuple(d["removed"]), tuple(tuple(e) for e in d["removed_edges"]),
            tuple(tuple(e) for e in d["added_edges"]), tuple(d["w_added"]), d["delta"],
            tuple(d["placeholder"]), None if d["take"] is None else tuple(d["take"]),
            tuple(d["zone"]), {int(v): (tuple(nb), ex) for v, (nb, ex) in d["local"].items()})


def apply_step(inst, step):
    """Perform the graph edits of ``step`` on ``inst`` in place."""
    for u, v in step.removed_edges:
        inst.adj[u].discard(v)
        inst.adj[v].discard(u)
    for v in step.removed:
        for u in inst.adj.pop(v):
            inst.adj[u].discard(v)
        inst.exempt.discard(v)
    for u, v in step.added_edges:
        assert v not in inst.adj[u], "rules never create parallel edges"
        inst.adj[u].add(v)
        inst.adj[v].add(u)
    inst.exempt.update(step.w_added)


def _record(inst, trace, rule, removed=(), removed_edges=(), added_edges=(), w_added=(),
            delta=0, placeholder=(), take=None, zone=()):
    touched = set(zone) | set(removed) | set(w_added)
    for e in itertools.chain(removed_edges, added_edges):
        touched.update(e)
    check = set(touched)
    for v in zone:
        check |= inst.adj[v]
    local = {v: (tuple(sorted(inst.adj[v])), v in inst.exempt) for v in check} if take is None else {}
    w_added = tuple(sorted(v for v in set(w_added) if v not in inst.exempt and v not in set(removed)))
    step = Step(rule, tuple(removed), tuple(removed_edges), tuple(added_edges), w_added, delta,
                tuple(placeholder), None if take is None else tuple(sorted(take)), tuple(zone), local)
    apply_step(inst, step)
    if trace is not None:
        trace.append(step)
    return step


def replay(g, trace, exempt=()):
    """Apply every step of ``trace`` to ``{g, exempt}``."""
    inst = RdsInstance.from_graph(g, exempt)
    for step in trace:
        apply_step(inst, step)
    return inst


def lift_step(step, solution):
    cur = set(solution)
    if step.take is not None:
        return cur | set(step.take)
    base = cur - set(step.zone)
    targets = [v for v, (_, ex) in step.local.items() if not ex]
    for size in range(len(step.zone) + 1):
        for extra in itertools.combinations(step.zone, size):
            sol = base | set(extra)
            if all(v in sol or any(u in sol for u in step.local[v][0]) for v in targets):
                if len(sol) > len(cur) + step.delta:
                    raise AssertionError("lifting %s needs more than %d extra vertices" % (step.rule, step.delta))
                return sol
    raise AssertionError("no local repair for %s" % step.rule)


def lift(trace, solution, g=None):
    """Turn a solution of the reduced instance into one of the original."""
    cur = set(solution)
    for step in reversed(trace):
        cur = lift_step(step, cur)
    if g is not None:
        assert is_dominating(g, cur)
    return frozenset(cur)


def partial_solution(trace):
    return frozenset(v for step in trace for v in step.placeholder)


# ------------------------------------------------------------------ paths and cycles

def _path_dom(seq, exempt):
    """Leaf reductions from one end of a path; returns a minimum solution."""
    out = []
    ex = set(exempt)
    i, m = 0, len(seq)
    while i < m:
        if seq[i] in ex:
            i += 1
        elif i + 1 < m:
            out.append(seq[i + 1])
            if i + 2 < m:
                ex.add(seq[i + 2])
            i += 2
        else:
            out.append(seq[i])
            i += 1
    return out


def _rdsc(seq, closed, must, exempt, t, case):
    """Constrained domination of a path or cycle given in vertex order."""
    m = len(seq)
    idx = {v: i for i, v in enumerate(seq)}

    def nbrs(v):
        i = idx[v]
        out = []
        if i > 0 or closed:
            out.append(seq[i - 1])
        if i < m - 1 or closed:
            out.append(seq[(i + 1) % m])
        return [u for u in out if u != v]

    must = set(must)
    if case == 1:
        must.add(t)
    ex = set(exempt)
    for v in must:
        ex.update(nbrs(v))
    banned = set(must)
    if case == 2:
        banned.add(t)
        ex.add(t)
    ok = ex | must
    pairs = [(seq[i], seq[i + 1]) for i in range(m - 1)]
    if closed and m > 2:
        pairs.append((seq[-1], seq[0]))
    for a, b in pairs:
        if a in ok and b in ok:
            banned.update((a, b))
    order = seq
    if closed and banned:
        start = min(idx[v] for v in banned)
        order = seq[start:] + seq[:start]
    elif closed:
        raise AssertionError("a cycle always has a banned vertex")
    out = set(must)
    run = []
    for v in order + [None]:
        if v is None or v in banned:
            out.update(_path_dom(run, ex))
            run = []
        else:
            run.append(v)
    return out


def _cycle_dom(seq, exempt):
    """Minimum solution of a relaxed instance that is a single cycle."""
    t = seq[0]
    ex = set(exempt)
    best = _rdsc(seq, True, (), ex - {t}, t, 1)
    if t in ex:
        opts = [_rdsc(seq, True, (), ex - {t}, t, 2)]
    else:
        opts = [_rdsc(seq, True, {n}, ex - {n}, t, 2) for n in (seq[1], seq[-1])]
    for s in opts:
        if len(s) < len(best):
            best = s
    return best


def _path_order(g):
    """Vertex order of a path graph, or None."""
    if g.n == 0:
        return []
    if g.m != g.n - 1 or not g.is_connected() or any(g.degree(v) > 2 for v in range(g.n)):
        return None
    start = min((v for v in range(g.n) if g.degree(v) <= 1))
    seq, prev = [start], None
    while len(seq) < g.n:
        nxt = [u for u in g.adj[seq[-1]] if u != prev][0]
        prev = seq[-1]
        seq.append(nxt)
    return seq


def _line_order(g):
    """``(order, closed)`` for a path or cycle graph, else raise InputError."""
    seq = _path_order(g)
    if seq is not None:
        return seq, False
    if g.n >= 3 and g.m == g.n and g.is_connected() and all(g.degree(v) == 2 for v in range(g.n)):
        seq, prev = [0], None
        while len(seq) < g.n:
            nxt = [u for u in g.adj[seq[-1]] if u != prev][0]
            prev = seq[-1]
            seq.append(nxt)
        return seq, True
    raise InputError("expected a path or a cycle")


def path_dominate(inst):
    """Minimum exempt-relaxed dominating set of an instance whose graph is a path."""
    g, ids, exempt = inst.to_graph()
    seq = _path_order(g)
    if seq is None:
        raise InputError("path_dominate needs a path graph")
    return frozenset(ids[v] for v in _path_dom(seq, exempt))


def rdsc_solve(c, must, exempt, t, case):
    """Constrained domination on a path or cycle graph ``c``.

    Case 1: smallest set containing ``must`` and ``t`` dominating every
    vertex outside ``exempt``.  Case 2: smallest set containing ``must`` but
    not ``t`` dominating every vertex outside ``exempt`` and ``t``.
    """
    if case not in (1, 2):
        raise InputError("case must be 1 or 2")
    must, exempt = set(must), set(exempt)
    c.check_vertices(must | exempt | {t})
    if must & exempt:
        raise InputError("forced and exempt vertices must be disjoint")
    if case == 2 and t in must:
        raise InputError("t cannot be both forced and forbidden")
    seq, closed = _line_order(c)
    out = _rdsc(seq, closed, must, exempt, t, case)
    assert must <= out and (t in out) == (case == 1)
    return frozenset(out)


# ------------------------------------------------------------------ elimination

@dataclass
class Elimination:
    n: int
    kernel: list        # surviving edges (u, v), parallel edges repeated
    paths: list         # for each surviving edge, its path in the input as a vertex list
    cycles: dict        # v -> list of vertex sets recorded at v
    bridges: list       # (v, w) for every degree-one elimination
    events: list        # (vertex, "A" | "B" | "C") in elimination order

    @property
    def kernel_vertices(self):
        return sorted({v for e in self.kernel for v in e})

    def kernel_edge_set(self):
        out = set()
        for p in self.paths:
            for a, b in zip(p, p[1:]):
                out.add((min(a, b), max(a, b)))
        return out


def eliminate(g, order="fifo", seed=0):
    """Repeatedly eliminate vertices of degree 1 or 2 (degree 0 is kept).

    ``order`` picks the next candidate: "fifo" (ids ascending on ties),
    "lifo" or "random".  The kernel does not depend on the order.
    """
    require_simple(g)
    edges = {}
    inc = [set() for _ in range(g.n)]
    for i, (u, v) in enumerate(g.edges):
        edges[i] = (u, v, [u, v])
        inc[u].add(i)
        inc[v].add(i)
    next_id = len(edges)
    cycles = {v: [] for v in range(g.n)}
    bridges, events = [], []
    gone = [False] * g.n
    queued = [False] * g.n
    rng = random.Random(seed)
    queue = deque()

    def push(v):
        if not queued[v] and not gone[v] and 1 <= len(inc[v]) <= 2:
            queued[v] = True
            queue.append(v)

    def drop(eid):
        u, v, _ = edges.pop(eid)
        inc[u].discard(eid)
        inc[v].discard(eid)

    def toward(eid, end):
        u, v, p = edges[eid]
        return p if p[-1] == end else p[::-1]

    for v in range(g.n):
        push(v)
    while queue:
        if order == "lifo":
            v = queue.pop()
        elif order == "random":
            queue.rotate(-rng.randrange(len(queue)))
            v = queue.popleft()
        else:
            v = queue.popleft()
        if gone[v] or not 1 <= len(inc[v]) <= 2:
            continue
        ids = sorted(inc[v])
        ends = []
        for eid in ids:
            a, b, _ = edges[eid]
            ends.append(b if a == v else a)
        if len(ids) == 1:
            w = ends[0]
            drop(ids[0])
            bridges.append((v, w))
            if not cycles[v]:
                cycles[v] = [frozenset([v])]
            events.append((v, "A"))
            push(w)
        elif ends[0] == ends[1]:
            w = ends[0]
            cyc = frozenset(edges[ids[0]][2]) | frozenset(edges[ids[1]][2])
            drop(ids[0])
            drop(ids[1])
            cycles[w].append(cyc)
            events.append((v, "B"))
            push(w)
        else:
            u, w = ends
            p = toward(ids[0], v) + toward(ids[1], v)[::-1][1:]
            assert p[0] == u and p[-1] == w
            drop(ids[0])
            drop(ids[1])
            edges[next_id] = (u, w, p)
            inc[u].add(next_id)
            inc[w].add(next_id)
            next_id += 1
            events.append((v, "C"))
        gone[v] = True
    kernel = [(min(u, v), max(u, v)) for u, v, _ in edges.values()]
    paths = [p for _, _, p in edges.values()]
    order_key = sorted(range(len(kernel)), key=lambda i: (kernel[i], paths[i]))
    return Elimination(g.n, [kernel[i] for i in order_key], [paths[i] for i in order_key],
                       {v: c for v, c in cycles.items() if c}, bridges, events)


# ------------------------------------------------------------------ cactus structure

@dataclass
class CactusNode:
    kind: str                 # "cycle" or "single"
    vertices: list            # for cycles, in cyclic order starting at the articulation vertex
    articulation: int
    attach: str               # "root", "vertex" or "edge"
    anchor: Optional[int]     # for edge-attached nodes, the vertex across the bridge
    parent: int = -1
    children: list = field(default_factory=list)


@dataclass
class CactusTree:
    root_vertex: int
    nodes: list
    root: int

    def postorder(self):
        out, stack = [], [(self.root, False)]
        while stack:
            x, done = stack.pop()
            if done:
                out.append(x)
                continue
            stack.append((x, True))
            for c in reversed(self.nodes[x].children):
                stack.append((c, False))
        return out

    def cycle_sets(self):
        return [frozenset(nd.vertices) for nd in self.nodes if nd.kind == "cycle"]


def cactus_tree(h, root):
    """Tree of cycles and cycle-free vertices of a connected cactus ``h``.

    Built from a DFS from ``root``: each non-tree edge closes one cycle whose
    top is its shallowest vertex.  A cycle hangs off the node that owns its
    top (vertex-attached) or, when the top lies on no other cycle, off the
    node owning the top's DFS parent (edge-attached through that bridge).
    """
    if not h.is_connected():
        raise InputError("a cactus must be connected")
    if not is_cactus(h):
        raise InputError("graph is not a cactus")
    parent, order, depth, tree = dfs_forest(h, roots=[root])
    cycles = []
    tops = {}
    owner = {}
    for i, (a, b) in enumerate(h.edges):
        if i in tree:
            continue
        x, t = (a, b) if depth[a] > depth[b] else (b, a)
        seq = [x]
        while seq[-1] != t:
            seq.append(parent[seq[-1]])
        seq.reverse()
        cid = len(cycles)
        cycles.append(seq)
        tops.setdefault(t, []).append(cid)
        for y in seq[1:]:
            assert y not in owner, "tree edge on two cycles"
            owner[y] = cid
    on_cycle = set(owner) | set(tops)
    nodes = [CactusNode("cycle", seq, seq[0], "", None) for seq in cycles]
    single = {}
    for v in order:
        if v not in on_cycle:
            single[v] = len(nodes)
            nodes.append(CactusNode("single", [v], v, "", None))

    def home(v):
        if v in owner:
            return owner[v]
        if v in tops:
            return tops[v][0]
        return single[v]

    top_node = None
    for i, nd in enumerate(nodes):
        t = nd.articulation
        if nd.kind == "cycle" and home(t) != i:
            nd.attach, nd.parent = "vertex", home(t)
        elif t == root:
            nd.attach = "root"
            top_node = i
        else:
            nd.attach, nd.anchor, nd.parent = "edge", parent[t], home(parent[t])
    for i, nd in enumerate(nodes):
        if nd.parent >= 0:
            nodes[nd.parent].children.append(i)
    assert top_node == home(root)
    return CactusTree(root, nodes, top_node)


@dataclass
class Cactus:
    root: int
    vertices: list
    whole: bool          # True when the cactus is a whole component without kernel
    tree: CactusTree     # over original vertex ids


@dataclass
class CactusKernelDecomposition:
    k: int
    elimination: Elimination
    kernel_edges: set
    kernel_vertices: list
    high_degree: list
    cacti: list
    cactus_edges: set


def _map_tree(tree, ids):
    nodes = [CactusNode(nd.kind, [ids[v] for v in nd.vertices], ids[nd.articulation], nd.attach,
                        None if nd.anchor is None else ids[nd.anchor], nd.parent, list(nd.children))
             for nd in tree.nodes]
    return CactusTree(ids[tree.root_vertex], nodes, tree.root)


def cactus_kernel(g, order="fifo", seed=0):
    """Split the edges into kernel paths and a forest of rooted cacti."""
    require_simple(g)
    el = eliminate(g, order, seed)
    ek = el.kernel_edge_set()
    vk = sorted({v for e in ek for v in e})
    vkset = set(vk)
    # the path edge sets are disjoint and cover exactly the kernel edges
    assert sum(len(p) - 1 for p in el.paths) == len(ek)
    rest = Graph(g.n, [e for e in g.edges if e not in ek])
    cacti = []
    for comp in rest.components():
        roots = [v for v in comp if v in vkset]
        assert len(roots) <= 1, "each cactus meets the kernel in at most one vertex"
        if roots and len(comp) == 1:
            continue
        root = roots[0] if roots else comp[0]
        h, ids = rest.induced_subgraph(comp)
        tree = _map_tree(cactus_tree(h, ids.index(root)), ids)
        cacti.append(Cactus(root, comp, not roots, tree))
    k = fes_number(g)
    dec = CactusKernelDecomposition(k, el, ek, vk, el.kernel_vertices, cacti, set(rest.edges))
    assert len(dec.high_degree) <= 2 * k and len(el.kernel) <= 3 * k
    return dec


# ------------------------------------------------------------------ dangling cacti

def dominate_dangling_cactus(h, root, whole=False):
    """Optimal partial solution for a cactus attached to the rest of a graph at ``root``.

    Returns a smallest set of vertices of ``h`` dominating every vertex but
    ``root``, chosen so that it extends to a minimum dominating set of any
    graph that meets ``h`` only in ``root``, and containing ``root`` when
    some such smallest set does.  With ``whole=True`` the cactus is the
    entire graph and ``root`` is dominated as well.

    Nodes of the cactus tree are processed children first.  For a cycle
    with articulation ``t`` three candidates are compared: ``t`` taken,
    ``t`` left alone, and ``t`` left out but dominated from the cycle.
    """
    h.check_vertices([root])
    tree = cactus_tree(h, root)
    chosen, dom = set(), set()

    def take(vs):
        for v in vs:
            chosen.add(v)
            dom.update(h.closed_neighborhood(v))

    for x in tree.postorder():
        nd = tree.nodes[x]
        if nd.kind == "single":
            v = nd.vertices[0]
            if v != root and v not in dom:
                take([nd.anchor])
            continue
        seq, t = nd.vertices, nd.articulation
        must = {v for v in seq if v in chosen}
        ex = {v for v in seq if v in dom} - must
        s1 = _rdsc(seq, True, must, ex, t, 1)
        if t in chosen:
            take(s1)
            continue
        s2 = _rdsc(seq, True, must, ex, t, 2)
        # taking t can beat leaving it out, since t covers both cycle neighbors
        if len(s1) <= len(s2):
            take(s1)
            continue
        if t in dom:
            s2d = s2
        else:
            s2d = min((_rdsc(seq, True, must | {n}, ex - {n}, t, 2) for n in (seq[1], seq[-1])),
                      key=len)
        if len(s2d) == len(s2):
            take(s2d)
        elif nd.attach == "edge":
            take(s2)
            take([nd.anchor])
        else:
            take(s2)
    if whole and root not in dom:
        take([root])
    assert is_dominating(h, chosen, [v for v in range(h.n) if v != root or whole])
    return frozenset(chosen)


# ------------------------------------------------------------------ single rules

def _leaf(inst, trace, v):
    nb = inst.adj[v]
    if len(nb) > 1:
        raise InputError("vertex %r is not a leaf" % (v,))
    if v in inst.exempt:
        return _record(inst, trace, "leaf-exempt", removed=(v,), zone=(v,))
    if not nb:
        return _record(inst, trace, "isolated", removed=(v,), delta=1, placeholder=(v,), zone=(v,))
    u = next(iter(nb))
    return _record(inst, trace, "leaf", removed=(v, u), w_added=tuple(inst.adj[u] - {v}),
                   delta=1, placeholder=(u,), zone=(v, u))


def leaf_reduce(inst, v, trace=None):
    """Remove a vertex of degree at most one; returns ``(instance, step)``.

    An exempt leaf is dropped.  Otherwise its neighbor ``u`` joins the
    solution, both are dropped and the remaining neighbors of ``u`` become
    exempt since ``u`` dominates them.
    """
    out = inst.copy()
    if v not in out.adj:
        raise InputError("vertex %r is not in the instance" % (v,))
    return out, _leaf(out, trace, v)


def dangling_path_reduce(inst, path, trace=None):
    """Eat a dangling path ``u - q - v`` (u a leaf) by repeated leaf reductions.

    Returns ``(instance, added)`` where ``added`` is the set of vertices the
    reductions put into the solution.
    """
    out = inst.copy()
    path = list(path)
    if len(path) < 2 or any(v not in out.adj for v in path):
        raise InputError("path vertices must be in the instance")
    for a, b in zip(path, path[1:]):
        if b not in out.adj[a]:
            raise InputError("consecutive path vertices must be adjacent")
    if out.degree(path[0]) != 1:
        raise InputError("the path must start at a leaf")
    if any(out.degree(v) != 2 for v in path[1:-1]):
        raise InputError("inner path vertices must have degree 2")
    steps = []
    for v in path[:-1]:
        if v in out.adj:
            steps.append(_leaf(out, None, v))
    if trace is not None:
        trace.extend(steps)
    return out, frozenset(p for s in steps for p in s.placeholder)


def _check_segment(inst, seg, size):
    if len(seg) != size or len(set(seg[1:-1])) != size - 2:
        raise InputError("segment must have %d vertices" % size)
    for v in seg:
        if v not in inst.adj:
            raise InputError("segment vertex %r is not in the instance" % (v,))
    for a, b in zip(seg, seg[1:]):
        if b not in inst.adj[a]:
            raise InputError("consecutive segment vertices must be adjacent")
    if any(inst.degree(v) != 2 for v in seg[1:-1]):
        raise InputError("inner segment vertices must have degree 2")


def _wfree(inst, trace, seg):
    u, u1, u2, u3, v = seg
    return _record(inst, trace, "wfree", removed=(u1, u2, u3), added_edges=((u, v),),
                   delta=1, placeholder=(u2,), zone=(u1, u2, u3))


def wfree_path_reduce(inst, seg, trace=None):
    """Replace ``u - u1 - u2 - u3 - v`` (inner vertices not exempt) by the edge ``u - v``.

    The optimum drops by exactly one.  Lifting cannot always just add ``u2``
    back: when the reduced solution holds ``u`` but not ``v`` and relies on
    the new edge to dominate ``v``, the repair takes ``u3`` instead.
    """
    seg = list(seg)
    _check_segment(inst, seg, 5)
    u, v = seg[0], seg[-1]
    if any(x in inst.exempt for x in seg[1:4]):
        raise InputError("inner vertices must not be exempt")
    if u == v or v in inst.adj[u]:
        raise InputError("end vertices must be distinct and non-adjacent")
    out = inst.copy()
    _wfree(out, trace, seg)
    return out


def _b1(inst, trace, seg):
    w1, u, w2, v, w3 = seg
    return _record(inst, trace, "b1", removed=(w2,), added_edges=((u, v),), zone=(u, w2, v))


def _b2(inst, trace, seg):
    w1, u1, u2, w2, v1, v2, w3 = seg
    return _record(inst, trace, "b2", removed=(u2, w2, v1), added_edges=((u1, v2),),
                   delta=1, placeholder=(w2,), zone=(u1, u2, w2, v1, v2))


def _b3(inst, trace, seg):
    w1, u1, u2, w2, v1, w3 = seg
    return _record(inst, trace, "b3", removed=(u2, w2, v1), added_edges=((u1, w3),),
                   delta=1, placeholder=(u2,), zone=(u1, u2, w2, v1))


def _segment_kind(inst, seg):
    """Which exempt-pattern rule (if any) matches the segment."""
    ex = [v in inst.exempt for v in seg]
    if len(seg) == 5 and ex == [True, False, True, False, True]:
        return "b1"
    if len(seg) == 7 and ex == [True, False, False, True, False, False, True]:
        return "b2"
    if len(seg) == 6 and ex == [True, False, False, True, False, True] and seg[0] != seg[-1]:
        return "b3"
    return None


def segment_reduce(inst, seg, trace=None):
    """Apply the exempt-pattern rule matching ``seg`` (outer and middle vertices exempt).

    ``w1-u-w2-v-w3`` becomes ``w1-u-v-w3`` (optimum unchanged);
    ``w1-u1-u2-w2-v1-v2-w3`` becomes ``w1-u1-v2-w3`` and
    ``w1-u1-u2-w2-v1-w3`` becomes ``w1-u1-w3`` (optimum drops by one).
    """
    seg = list(seg)
    if len(seg) not in (5, 6, 7):
        raise InputError("segment must have 5, 6 or 7 vertices")
    _check_segment(inst, seg, len(seg))
    kind = _segment_kind(inst, seg)
    if kind is None:
        raise InputError("segment matches no rule")
    out = inst.copy()
    {"b1": _b1, "b2": _b2, "b3": _b3}[kind](out, trace, seg)
    return out


# ------------------------------------------------------------------ reduction loop

def _chain(inst, x):
    """Maximal run of degree-2 vertices through ``x``.

    Returns ``(seq, ring)``: for a ring the cycle in order, otherwise the run
    with its two end vertices (which may coincide) at both ends.
    """
    adj = inst.adj
    a, b = sorted(adj[x])

    def walk(prev, cur):
        out = []
        while True:
            out.append(cur)
            if cur == x or len(adj[cur]) != 2:
                return out
            nxt = next(iter(adj[cur] - {prev}))
            prev, cur = cur, nxt

    right = walk(x, b)
    if right[-1] == x:
        return [x] + right[:-1], True
    left = walk(x, a)
    return left[::-1] + [x] + right, False


def _find_pattern(inst, seq):
    ex = inst.exempt
    adj = inst.adj
    n = len(seq)
    for i in range(n):
        if i + 4 < n and i + 3 <= n - 2:
            win = seq[i:i + 5]
            if not any(v in ex for v in win[1:4]):
                if win[0] != win[4] and win[4] not in adj[win[0]]:
                    return _wfree, win
            elif _segment_kind(inst, win) == "b1":
                return _b1, win
        if i + 6 < n and i + 5 <= n - 2:
            win = seq[i:i + 7]
            if _segment_kind(inst, win) == "b2":
                return _b2, win
        if i + 5 < n and i + 4 <= n - 2:
            win = seq[i:i + 6]
            if _segment_kind(inst, win) == "b3":
                return _b3, win
            rev = win[::-1]
            if _segment_kind(inst, rev) == "b3":
                return _b3, rev
    return None


def _reduce_loop(inst, trace, start=None):
    stack = sorted(inst.adj if start is None else start, reverse=True)
    queued = set(stack)

    def push(vs):
        for v in sorted(vs, reverse=True):
            if v in inst.adj and v not in queued:
                queued.add(v)
                stack.append(v)

    while stack:
        x = stack.pop()
        queued.discard(x)
        if x not in inst.adj:
            continue
        nb = inst.adj[x]
        if len(nb) <= 1:
            around = set(nb)
            for u in nb:
                around |= inst.adj[u]
            _leaf(inst, trace, x)
            push(around)
            continue
        if x in inst.exempt:
            ww = sorted(u for u in nb if u in inst.exempt)
            if ww:
                _record(inst, trace, "ww-edge", removed_edges=tuple((min(x, u), max(x, u)) for u in ww))
                push([x] + ww)
                continue
        if len(nb) != 2:
            continue
        seq, ring = _chain(inst, x)
        if ring:
            sol = _cycle_dom(seq, inst.exempt & set(seq))
            _record(inst, trace, "cycle", removed=tuple(seq), delta=len(sol),
                    placeholder=tuple(sorted(sol)), take=tuple(sol))
            continue
        found = _find_pattern(inst, seq)
        if found is None:
            continue
        rule, win = found
        rule(inst, trace, win)
        push([v for v in win if v in inst.adj] + [x])
    return inst


def induced_path_reduce(inst, trace=None):
    """Shrink every induced path to at most 9 edges; returns ``(instance, trace)``.

    Besides the path rules this also applies leaf reductions, drops edges
    between exempt vertices and solves cycle components outright.
    """
    out = inst.copy()
    trace = [] if trace is None else trace
    _reduce_loop(out, trace)
    return out, trace


# ------------------------------------------------------------------ compression

@dataclass
class Compression:
    instance: RdsInstance
    partial: frozenset
    trace: list
    k: int
    decomposition: CactusKernelDecomposition

    def lift(self, solution, g=None):
        return lift(self.trace, solution, g)

    def bounds(self):
        inst, k = self.instance, self.k
        return {"edges": (inst.m, 27 * k), "vertices": (inst.n, 26 * k),
                "high_degree": (len(inst.high_degree()), 2 * k)}


def compress(g, order="fifo", seed=0):
    """Reduce minimum dominating set on ``g`` to a small relaxed instance.

    The optimum of ``g`` equals ``|partial|`` plus the optimum of the
    returned instance.  Weights are ignored.
    """
    require_simple(g)
    dec = cactus_kernel(g, order, seed)
    inst = RdsInstance.from_graph(g)
    trace = []
    roots_taken = []
    for c in dec.cacti:
        h, ids = g.induced_subgraph(c.vertices)
        local_root = ids.index(c.root)
        s_h = {ids[v] for v in dominate_dangling_cactus(h, local_root, c.whole)}
        if c.whole:
            _record(inst, trace, "cactus", removed=tuple(c.vertices), delta=len(s_h),
                    placeholder=tuple(sorted(s_h)), take=tuple(s_h))
            continue
        inner = s_h - {c.root}
        dominated = any(u in s_h for u in g.closed_neighborhood(c.root))
        w = (c.root,) if dominated and c.root not in s_h else ()
        _record(inst, trace, "cactus", removed=tuple(v for v in c.vertices if v != c.root),
                w_added=w, delta=len(inner), placeholder=tuple(sorted(inner)), take=tuple(inner))
        if c.root in s_h:
            roots_taken.append(c.root)
    for r in roots_taken:
        _record(inst, trace, "take", removed=(r,), w_added=tuple(inst.adj[r]), delta=1,
                placeholder=(r,), take=(r,))
    _reduce_loop(inst, trace)
    res = Compression(inst, partial_solution(trace), trace, dec.k, dec)
    for what, (have, bound) in res.bounds().items():
        assert have <= bound, "compressed %s %d exceeds %d" % (what, have, bound)
    return res


# ------------------------------------------------------------------ trace files

def trace_to_jsonl(comp, ids):
    """JSON lines: a header with the dense-to-original vertex map, then the steps."""
    head = {"type": "header", "k": comp.k, "vertex_map": list(ids),
            "partial": sorted(comp.partial), "exempt": sorted(comp.instance.exempt)}
    lines = [json.dumps(head)]
    lines += [json.dumps(dict(s.to_json(), type="step")) for s in comp.trace]
    return "\n".join(lines) + "\n"


def trace_from_jsonl(text):
    header, steps = None, []
    for line in text.splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        if d.get("type") == "header":
            header = d
        else:
            steps.append(Step.from_json(d))
    if header is None:
        raise InputError("trace has no header record")
    return header, steps
