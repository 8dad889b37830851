"""Tree decompositions: construction, nice form, verification, balanced partition.

A raw decomposition is a list of bags plus the edges of a tree on the bag
indices.  A nice decomposition is rooted, has empty root and leaf bags, and
every node is a Leaf, Introduce(v), Forget(v) or Join node.
"""

import math
from collections import namedtuple
from dataclasses import dataclass, field
from itertools import combinations

from .errors import InputError, ParseError, StrategyFailure, ValidationError, WidthExceeded
from .graph import from_mask, popcount

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"

Violation = namedtuple("Violation", "axiom detail")

EXACT_CAP = 25
SEARCH_BUDGET = 200000


class RawDecomposition:
    def __init__(self, bags, edges=()):
        self.bags = [frozenset(b) for b in bags]
        self.edges = [tuple(e) for e in edges]

    @property
    def width(self):
        return max((len(b) for b in self.bags), default=0) - 1

    def __repr__(self):
        return "RawDecomposition(%d bags, width %d)" % (len(self.bags), self.width)


class NiceTreeDecomposition:
    """Rooted nice tree decomposition stored as parallel node arrays."""

    def __init__(self, kinds, bags, vertices, children, root, meta=None):
        self.kind = list(kinds)
        self.bag = [tuple(sorted(b)) for b in bags]
        self.vertex = list(vertices)
        self.children = [tuple(c) for c in children]
        self.root = root
        self.meta = dict(meta or {})

    def __len__(self):
        return len(self.kind)

    @property
    def width(self):
        return max((len(b) for b in self.bag), default=0) - 1

    def tree_edges(self):
        return [(x, c) for x in range(len(self)) for c in self.children[x]]

    def to_raw(self):
        return RawDecomposition(self.bag, self.tree_edges())

    def postorder(self):
        out = []
        stack = [(self.root, False)]
        while stack:
            x, done = stack.pop()
            if done:
                out.append(x)
                continue
            stack.append((x, True))
            for c in reversed(self.children[x]):
                stack.append((c, False))
        return out

    def preorder(self):
        out = []
        stack = [self.root]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(reversed(self.children[x]))
        return out

    def parents(self):
        par = [-1] * len(self)
        for x in range(len(self)):
            for c in self.children[x]:
                par[c] = x
        return par

    def vertices(self):
        out = set()
        for b in self.bag:
            out.update(b)
        return out

    def __repr__(self):
        return "NiceTreeDecomposition(%d nodes, width %d)" % (len(self), self.width)


# ------------------------------------------------------------------ verify

def _tree_violations(nbags, edges):
    out = []
    if nbags == 0:
        return [Violation("tree", "decomposition has no nodes")]
    adj = [[] for _ in range(nbags)]
    for a, b in edges:
        if not (0 <= a < nbags and 0 <= b < nbags) or a == b:
            out.append(Violation("tree", "bad tree edge (%r, %r)" % (a, b)))
            continue
        adj[a].append(b)
        adj[b].append(a)
    if out:
        return out
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != nbags:
        out.append(Violation("tree", "tree is disconnected (%d of %d nodes reachable)" % (len(seen), nbags)))
    if len(edges) != nbags - 1:
        out.append(Violation("tree", "tree has %d edges for %d nodes" % (len(edges), nbags)))
    return out


def _occurrence_violations(bags, edges, n):
    """Vertices whose bag occurrences are empty or induce a disconnected subtree."""
    out = []
    occ = {}
    for i, b in enumerate(bags):
        for v in b:
            occ.setdefault(v, []).append(i)
    for v in sorted(occ):
        if n is not None and not (0 <= v < n):
            out.append(Violation("range", "vertex %r is not a vertex of the graph" % (v,)))
    adj = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    for v, nodes in sorted(occ.items()):
        nodes_set = set(nodes)
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y in nodes_set and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(nodes_set):
            out.append(Violation("connectivity", "bags containing vertex %d are not connected" % v))
    if n is not None:
        for v in range(n):
            if v not in occ:
                out.append(Violation("vertex-coverage", "vertex %d is in no bag" % v))
    return out


def _edge_violations(bags, g):
    out = []
    for u, v in sorted(set(g.edges)):
        if not any(u in b and v in b for b in bags):
            out.append(Violation("edge-coverage", "edge (%d, %d) is in no bag" % (u, v)))
    return out


def _nice_violations(td):
    out = []
    if td.bag[td.root]:
        out.append(Violation("nice-root", "root bag is not empty"))
    for x in range(len(td)):
        k, bag, ch = td.kind[x], set(td.bag[x]), td.children[x]
        if k == LEAF:
            if ch or bag:
                out.append(Violation("nice-leaf", "leaf %d has children or a non-empty bag" % x))
        elif k == INTRODUCE:
            v = td.vertex[x]
            if len(ch) != 1 or v not in bag or set(td.bag[ch[0]]) != bag - {v}:
                out.append(Violation("nice-introduce", "node %d is not a valid introduce node" % x))
        elif k == FORGET:
            v = td.vertex[x]
            if len(ch) != 1 or v in bag or set(td.bag[ch[0]]) != bag | {v}:
                out.append(Violation("nice-forget", "node %d is not a valid forget node" % x))
        elif k == JOIN:
            if len(ch) != 2 or any(set(td.bag[c]) != bag for c in ch):
                out.append(Violation("nice-join", "node %d is not a valid join node" % x))
        else:
            out.append(Violation("nice-kind", "node %d has unknown kind %r" % (x, k)))
    return out


def verify(td, g=None):
    """List every violated decomposition axiom (empty list means valid).

    Works for raw and nice decompositions; nice ones are also checked for the
    node-type rules.  Without ``g`` only the tree and connectivity axioms are
    checked.
    """
    if isinstance(td, NiceTreeDecomposition):
        bags, edges = td.bag, td.tree_edges()
    else:
        bags, edges = td.bags, td.edges
    out = _tree_violations(len(bags), edges)
    if out:
        return out
    out += _occurrence_violations(bags, edges, g.n if g is not None else None)
    if g is not None:
        out += _edge_violations(bags, g)
    if isinstance(td, NiceTreeDecomposition):
        out += _nice_violations(td)
    return out


def require_valid(td, g):
    bad = verify(td, g)
    if bad:
        raise ValidationError("invalid tree decomposition: " + bad[0].axiom + ": " + bad[0].detail, bad)


# ------------------------------------------------------------------ nice form

def make_nice(raw, g=None, root=0):
    """Convert a valid raw decomposition into a nice one of the same width.

    Between a node and each child the bag first shrinks to the intersection
    (introduce nodes) and then grows to the child's bag (forget nodes), so no
    new bag is larger than an existing one.  Nodes with several children get
    a chain of binary join nodes, children taken in index order.
    """
    bad = verify(raw, g)
    if bad:
        raise ValidationError("cannot make nice: %s: %s" % (bad[0].axiom, bad[0].detail), bad)
    nb = len(raw.bags)
    adj = [[] for _ in range(nb)]
    for a, b in raw.edges:
        adj[a].append(b)
        adj[b].append(a)
    kinds, bags, verts, children = [], [], [], []

    def new(bag):
        kinds.append(None)
        bags.append(frozenset(bag))
        verts.append(None)
        children.append([])
        return len(kinds) - 1

    def step(cur, kind, v, child_bag):
        kinds[cur] = kind
        verts[cur] = v
        c = new(child_bag)
        children[cur].append(c)
        return c

    top = new(())
    stack = [(top, root, -1)]
    while stack:
        cur, r, parent = stack.pop()
        target = raw.bags[r]
        for v in sorted(bags[cur] - target):
            cur = step(cur, INTRODUCE, v, bags[cur] - {v})
        for v in sorted(target - bags[cur]):
            cur = step(cur, FORGET, v, bags[cur] | {v})
        kids = sorted(c for c in adj[r] if c != parent)
        if not kids:
            for v in sorted(target):
                cur = step(cur, INTRODUCE, v, bags[cur] - {v})
            kinds[cur] = LEAF
            continue
        pending = []
        while len(kids) > 1:
            kinds[cur] = JOIN
            left, right = new(target), new(target)
            children[cur] = [left, right]
            pending.append((left, kids.pop(0), r))
            cur = right
        pending.append((cur, kids[0], r))
        for item in reversed(pending):
            stack.append(item)
    td = NiceTreeDecomposition(kinds, bags, verts, children, top)
    assert td.width == raw.width
    return td


def add_to_all_bags(td, extra):
    """Nice decomposition with the vertices ``extra`` added to every bag.

    Forget nodes for ``extra`` are stacked above the old root and introduce
    chains below every old leaf, so the result is again nice.
    """
    extra = sorted(set(extra))
    if not extra:
        return td
    kinds, bags, verts, children = [], [], [], []

    def new(kind, bag, v, ch):
        kinds.append(kind)
        bags.append(frozenset(bag))
        verts.append(v)
        children.append(list(ch))
        return len(kinds) - 1

    es = frozenset(extra)
    assert not es & set(td.vertices()), "added vertices must be new to the decomposition"
    mapping = {}
    for x in td.postorder():
        bag = frozenset(td.bag[x]) | es
        if td.kind[x] == LEAF:
            cur = new(LEAF, (), None, ())
            acc = set()
            for v in extra:
                acc.add(v)
                cur = new(INTRODUCE, acc, v, (cur,))
            # the old leaf becomes the top of the introduce chain
            mapping[x] = cur
        else:
            mapping[x] = new(td.kind[x], bag, td.vertex[x], [mapping[c] for c in td.children[x]])
    cur = mapping[td.root]
    acc = set(es)
    for v in extra:
        acc.discard(v)
        cur = new(FORGET, acc, v, (cur,))
    return NiceTreeDecomposition(kinds, bags, verts, children, cur, dict(td.meta))


def relabel(td, ids):
    """Rename vertex ``i`` to ``ids[i]`` in every bag."""
    return NiceTreeDecomposition(
        td.kind, [[ids[v] for v in b] for b in td.bag],
        [None if v is None else ids[v] for v in td.vertex], td.children, td.root, td.meta)


# ------------------------------------------------------------------ construction

def _adjacency_masks(g):
    return {v: g.nbr_mask[v] for v in range(g.n)}


def _eliminate(adj, v):
    nb = adj.pop(v)
    rest = nb
    while rest:
        low = rest & -rest
        u = low.bit_length() - 1
        rest ^= low
        adj[u] = (adj[u] | nb) & ~low & ~(1 << v)


def decomposition_from_order(g, order):
    """Raw decomposition induced by an elimination order (one bag per vertex)."""
    adj = _adjacency_masks(g)
    pos = {v: i for i, v in enumerate(order)}
    bags = []
    later = []
    for v in order:
        nb = adj[v]
        bags.append(frozenset([v] + from_mask(nb)))
        later.append(from_mask(nb))
        _eliminate(adj, v)
    edges = []
    roots = []
    for i, v in enumerate(order):
        if later[i]:
            parent = min(pos[u] for u in later[i])
            edges.append((i, parent))
        else:
            roots.append(i)
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    if not bags:
        bags = [frozenset()]
    return RawDecomposition(bags, edges)


def order_width(g, order):
    adj = _adjacency_masks(g)
    w = -1
    for v in order:
        w = max(w, popcount(adj[v]))
        _eliminate(adj, v)
    return w


def _min_degree_order(g, limit=None):
    adj = _adjacency_masks(g)
    order = []
    width = -1
    while adj:
        v = min(adj, key=lambda x: (popcount(adj[x]), x))
        d = popcount(adj[v])
        if limit is not None and d > limit:
            return None, None
        width = max(width, d)
        order.append(v)
        _eliminate(adj, v)
    return order, width


def _min_fill_order(adj):
    adj = dict(adj)
    order = []
    width = -1

    def fill(v):
        nb = from_mask(adj[v])
        return sum(1 for a, b in combinations(nb, 2) if not (adj[a] >> b) & 1)

    while adj:
        v = min(adj, key=lambda x: (fill(x), popcount(adj[x]), x))
        width = max(width, popcount(adj[v]))
        order.append(v)
        _eliminate(adj, v)
    return order, width


def _minor_min_width(adj):
    """Lower bound on treewidth: contract min-degree vertices into a neighbor."""
    adj = dict(adj)
    lb = 0
    while len(adj) > 1:
        v = min(adj, key=lambda x: (popcount(adj[x]), x))
        d = popcount(adj[v])
        lb = max(lb, d)
        if d == 0:
            del adj[v]
            continue
        u = min(from_mask(adj[v]), key=lambda x: (popcount(adj[x]), x))
        nb = adj.pop(v)
        merged = (adj[u] | nb) & ~(1 << u) & ~(1 << v)
        adj[u] = merged
        rest = nb & ~(1 << u)
        while rest:
            low = rest & -rest
            x = low.bit_length() - 1
            rest ^= low
            adj[x] = (adj[x] & ~(1 << v)) | (1 << u)
        rest = merged
        while rest:
            low = rest & -rest
            x = low.bit_length() - 1
            rest ^= low
            adj[x] |= 1 << u
    return lb


def _is_clique(adj, mask):
    rest = mask
    while rest:
        low = rest & -rest
        x = low.bit_length() - 1
        rest ^= low
        if (mask & ~low) & ~adj[x]:
            return False
    return True


def exact_treewidth_order(g, budget=SEARCH_BUDGET):
    """Branch-and-bound over elimination orders.

    Returns ``(order, width, exact)``; ``exact`` is False when the node budget
    ran out and the best order found so far is returned instead.
    """
    start = _adjacency_masks(g)
    best_order, best = _min_fill_order(start)
    best = max(best, 0) if g.n else -1
    if g.n == 0:
        return [], -1, True
    seen = {}
    nodes = [0]
    exhausted = [False]

    def search(adj, prefix, width):
        nonlocal best, best_order
        nodes[0] += 1
        if nodes[0] > budget:
            exhausted[0] = True
            return
        if len(adj) <= max(width, 0) + 1 or len(adj) - 1 <= width:
            w = max(width, len(adj) - 1)
            if w < best:
                best = w
                best_order = prefix + sorted(adj)
            return
        lb = max(width, _minor_min_width(adj))
        if lb >= best:
            return
        key = frozenset(adj)
        if key in seen and seen[key] <= width:
            return
        seen[key] = width
        # a simplicial vertex, or an almost simplicial one of small degree,
        # can always be eliminated first
        for v in sorted(adj, key=lambda x: popcount(adj[x])):
            d = popcount(adj[v])
            if _is_clique(adj, adj[v]) or (d <= lb and any(
                    _is_clique(adj, adj[v] & ~(1 << u)) for u in from_mask(adj[v]))):
                nxt = dict(adj)
                _eliminate(nxt, v)
                search(nxt, prefix + [v], max(width, d))
                return
        for v in sorted(adj, key=lambda x: (popcount(adj[x]), x)):
            d = popcount(adj[v])
            if max(width, d) >= best:
                continue
            nxt = dict(adj)
            _eliminate(nxt, v)
            search(nxt, prefix + [v], max(width, d))
            if exhausted[0]:
                return

    search(start, [], -1)
    return best_order, best, not exhausted[0]


def decompose_bounded(g, d, exact_cap=EXACT_CAP, budget=SEARCH_BUDGET):
    """Nice tree decomposition of ``g`` built for the width bound ``d``.

    Graphs of treewidth at most 2 are handled exactly by min-degree
    elimination (forests give width at most 1, cacti at most 2).  For
    ``d <= 2`` a larger treewidth raises :class:`WidthExceeded`.  For larger
    ``d`` an exact branch-and-bound search is used up to ``exact_cap``
    vertices, and a min-fill heuristic beyond that; ``meta['exact']`` tells
    which.
    """
    order, width = _min_degree_order(g, limit=2)
    if order is not None:
        meta = {"method": "min-degree", "exact": True}
        if width > d:
            raise WidthExceeded(d, "treewidth is %d > %d" % (width, d))
    elif d <= 2:
        raise WidthExceeded(d, "treewidth exceeds %d" % d)
    elif g.n <= exact_cap:
        order, width, exact = exact_treewidth_order(g, budget)
        meta = {"method": "branch-and-bound", "exact": exact}
    else:
        order, width = _min_fill_order(_adjacency_masks(g))
        meta = {"method": "min-fill", "exact": False}
    td = make_nice(decomposition_from_order(g, order), g)
    td.meta.update(meta)
    return td


# ------------------------------------------------------------------ partition

@dataclass
class BalancedPartition:
    v1: frozenset
    v2: frozenset
    slack: int
    width: int
    bound: int = field(init=False)

    def __post_init__(self):
        self.bound = math.ceil(self.width / 2) + self.slack

    @property
    def sides(self):
        return (self.v1, self.v2)


def partition_slack(td, side):
    """Smallest c such that every bag has at most ceil(w/2) + c vertices per side."""
    half = math.ceil(td.width / 2) if td.width > 0 else 0
    worst = 0
    for b in td.bag:
        c1 = sum(1 for v in b if side.get(v, 0) == 0)
        worst = max(worst, c1, len(b) - c1)
    return max(0, worst - half)


def _greedy_top_down(td):
    """Assign each vertex at its topmost bag to the side with fewer bag members.

    A side only gains a vertex when it is not the larger side of the current
    bag, so no bag ever holds more than floor(w/2) + 1 vertices of one side.
    """
    side = {}
    par = td.parents()
    for x in td.preorder():
        bag = td.bag[x]
        above = set(td.bag[par[x]]) if par[x] >= 0 else set()
        for v in bag:
            if v in side or v in above:
                continue
            c1 = sum(1 for u in bag if side.get(u) == 0)
            c2 = sum(1 for u in bag if side.get(u) == 1)
            side[v] = 0 if c1 <= c2 else 1
    return side


def _local_rebalance(td, side, target):
    improved = True
    while improved and partition_slack(td, side) > target:
        improved = False
        current = partition_slack(td, side)
        for v in sorted(side):
            side[v] ^= 1
            if partition_slack(td, side) < current:
                improved = True
                break
            side[v] ^= 1
    return side


def _exhaustive(td, verts, target, cap=20):
    if len(verts) > cap:
        return None
    for bits in range(1 << len(verts)):
        side = {v: (bits >> i) & 1 for i, v in enumerate(verts)}
        if partition_slack(td, side) <= target:
            return side
    return None


def balanced_partition(g, td, max_slack=1):
    """Split V(g) into two sides so each bag has at most ceil(w/2) + c per side.

    The achieved slack ``c`` is reported and re-verified; if it exceeds
    ``max_slack`` after local and exhaustive repair a StrategyFailure is raised.
    """
    if verify(td, g):
        raise ValidationError("balanced_partition needs a valid decomposition", verify(td, g))
    side = _greedy_top_down(td)
    for v in range(g.n):
        side.setdefault(v, 0)
    if partition_slack(td, side) > max_slack:
        side = _local_rebalance(td, side, max_slack)
    if partition_slack(td, side) > max_slack:
        side = _exhaustive(td, list(range(g.n)), max_slack) or side
    c = partition_slack(td, side)
    if c > max_slack:
        raise StrategyFailure("could not reach slack %d (best %d)" % (max_slack, c))
    v1 = frozenset(v for v in range(g.n) if side[v] == 0)
    v2 = frozenset(v for v in range(g.n) if side[v] == 1)
    part = BalancedPartition(v1, v2, c, max(td.width, 0))
    if not check_partition(td, part):
        raise StrategyFailure("partition failed its own bound check")
    return part


def check_partition(td, part):
    if part.v1 & part.v2:
        return False
    bound = math.ceil(max(td.width, 0) / 2) + part.slack
    for b in td.bag:
        s = set(b)
        if len(s & part.v1) > bound or len(s & part.v2) > bound:
            return False
    return True


# ------------------------------------------------------------------ PACE format

def format_td(td, n):
    """PACE ``.td`` text for a raw or nice decomposition (1-based ids)."""
    raw = td.to_raw() if isinstance(td, NiceTreeDecomposition) else td
    lines = ["s td %d %d %d" % (len(raw.bags), raw.width + 1, n)]
    for i, b in enumerate(raw.bags, 1):
        lines.append(" ".join(["b", str(i)] + [str(v + 1) for v in sorted(b)]))
    for a, b in raw.edges:
        lines.append("%d %d" % (a + 1, b + 1))
    return "\n".join(lines) + "\n"


def parse_td(text):
    """Parse PACE ``.td`` text into ``(RawDecomposition, n)``."""
    header = None
    bags = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        try:
            if tok[0] == "s":
                if header is not None or len(tok) != 5 or tok[1] != "td":
                    raise ParseError("line %d: bad header" % lineno)
                header = tuple(int(t) for t in tok[2:])
            elif tok[0] == "b":
                i = int(tok[1])
                bags[i] = frozenset(int(t) - 1 for t in tok[2:])
            else:
                a, b = (int(t) for t in tok)
                edges.append((a - 1, b - 1))
        except ValueError:
            raise ParseError("line %d: malformed line %r" % (lineno, raw))
    if header is None:
        raise ParseError("missing 's td' header")
    nbags, size, n = header
    if sorted(bags) != list(range(1, nbags + 1)):
        raise ParseError("bag ids must be 1..%d" % nbags)
    raw = RawDecomposition([bags[i] for i in range(1, nbags + 1)], edges)
    if raw.width + 1 != size and nbags:
        raise ParseError("header announces bag size %d, largest bag has %d" % (size, raw.width + 1))
    return raw, n


def decompose_raw_input(raw, g):
    """Validate a user-supplied raw decomposition and make it nice."""
    if any(v >= g.n for b in raw.bags for v in b):
        raise InputError("decomposition mentions a vertex outside the graph")
    return make_nice(raw, g)
