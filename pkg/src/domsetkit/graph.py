"""Graph representation, basic queries and instance generators.

Vertices are dense integers ``0..n-1``.  Vertex sets are passed around as
Python sets or iterables in the public API; internally most routines use
integer bitmasks (bit ``v`` set means vertex ``v`` is present).
"""

import random

from .errors import InputError

# Saturating "infinite" weight.  Large enough that no real instance reaches
# it, small enough that INF + INF still fits comfortably in 64 bits.
INF = 1 << 62


def sat_add(a, b):
    s = a + b
    return INF if s >= INF else s


def to_mask(vertices):
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def from_mask(mask):
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def popcount(x):
    return bin(x).count("1")


class Graph:
    """Undirected graph with natural vertex weights.

    ``multi=True`` allows parallel edges; only the elimination phase of the
    compression pipeline builds such graphs.  Self-loops are never allowed.
    """

    def __init__(self, n, edges=(), weights=None, multi=False):
        if n < 0:
            raise InputError("negative vertex count")
        self.n = n
        self.multi = multi
        norm = []
        seen = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise InputError("edge (%d, %d) has an endpoint out of range" % (u, v))
            if u == v:
                raise InputError("self-loop at vertex %d" % u)
            if u > v:
                u, v = v, u
            if not multi:
                if (u, v) in seen:
                    raise InputError("parallel edge (%d, %d) in a simple graph" % (u, v))
                seen.add((u, v))
            norm.append((u, v))
        self.edges = tuple(norm)
        if weights is None:
            weights = [1] * n
        weights = [int(x) for x in weights]
        if len(weights) != n:
            raise InputError("weight vector has length %d, expected %d" % (len(weights), n))
        if any(x < 0 for x in weights):
            raise InputError("weights must be natural numbers")
        self.weights = tuple(weights)
        self._build()

    def _build(self):
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adj = tuple(tuple(sorted(a)) for a in adj)
        self.nbr_mask = tuple(to_mask(a) for a in self.adj)
        self.closed_mask = tuple(m | (1 << v) for v, m in enumerate(self.nbr_mask))

    @property
    def m(self):
        return len(self.edges)

    def rebuilt_adjacency(self):
        """Adjacency recomputed from the edge list (for consistency checks)."""
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def check_vertices(self, vertices):
        for v in vertices:
            if not (isinstance(v, int) and 0 <= v < self.n):
                raise InputError("vertex id %r out of range 0..%d" % (v, self.n - 1))

    def neighbors(self, v):
        return self.adj[v]

    def degree(self, v):
        return len(self.adj[v])

    def has_edge(self, u, v):
        return (self.nbr_mask[u] >> v) & 1 == 1

    def weight(self, vertices):
        return sum(self.weights[v] for v in vertices)

    def closed_neighborhood(self, v):
        return set(self.adj[v]) | {v}

    def open_neighborhood(self, vertices):
        """N(U) = N[U] minus U."""
        s = set(vertices)
        out = set()
        for v in s:
            out.update(self.adj[v])
        return out - s

    def is_simple(self):
        return len(set(self.edges)) == len(self.edges)

    def simple(self):
        """Copy with parallel edges merged."""
        return Graph(self.n, sorted(set(self.edges)), self.weights)

    def with_weights(self, weights):
        return Graph(self.n, self.edges, weights, self.multi)

    def unweighted(self):
        return Graph(self.n, self.edges, None, self.multi)

    def is_weighted(self):
        return any(x != 1 for x in self.weights)

    def induced_subgraph(self, keep):
        """Return ``(H, ids)`` where ``H`` is ``G[keep]`` relabeled densely.

        ``ids[i]`` is the original id of vertex ``i`` of ``H``.
        """
        ids = sorted(set(keep))
        index = {v: i for i, v in enumerate(ids)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        weights = [self.weights[v] for v in ids]
        return Graph(len(ids), edges, weights, self.multi), ids

    def remove_vertices(self, removed):
        removed = set(removed)
        return self.induced_subgraph(v for v in range(self.n) if v not in removed)

    def components(self):
        """Connected components as sorted vertex lists, ordered by smallest id."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack = [s]
            comp = []
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in self.adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        stack.append(u)
            comps.append(sorted(comp))
        return comps

    def is_connected(self):
        return self.n <= 1 or len(self.components()) == 1

    def __repr__(self):
        return "Graph(n=%d, m=%d%s)" % (self.n, self.m, ", multi" if self.multi else "")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and sorted(self.edges) == sorted(other.edges)
                and self.weights == other.weights)

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.edges)), self.weights))


def require_simple(g):
    if not g.is_simple():
        raise InputError("solver entry points require a simple graph")


def is_dominating(g, s, targets=None):
    """True iff every target has a closed neighbor in ``s``."""
    s = list(s)
    g.check_vertices(s)
    if targets is None:
        targets = range(g.n)
    targets = list(targets)
    g.check_vertices(targets)
    smask = to_mask(s)
    return all(g.closed_mask[t] & smask for t in targets)


def undominated(g, s, targets=None):
    smask = to_mask(s)
    if targets is None:
        targets = range(g.n)
    return [t for t in targets if not g.closed_mask[t] & smask]


def dfs_forest(g, roots=None):
    """Depth-first spanning forest.

    Each component is rooted at its smallest vertex and neighbors are explored
    in ascending order.  Returns ``(parent, preorder, depth, tree_edge_index)``
    where ``parent[root] == -1`` and ``tree_edge_index`` holds the indices into
    ``g.edges`` of the tree edges.
    """
    n = g.n
    parent = [-1] * n
    depth = [0] * n
    seen = [False] * n
    order = []
    # incident edge indices per vertex so parallel edges are handled by index
    inc = [[] for _ in range(n)]
    for i, (u, v) in enumerate(g.edges):
        inc[u].append((v, i))
        inc[v].append((u, i))
    for lst in inc:
        lst.sort()
    tree = set()
    for r in (roots if roots is not None else range(n)):
        if seen[r]:
            continue
        seen[r] = True
        order.append(r)
        stack = [(r, 0)]
        while stack:
            v, i = stack[-1]
            if i == len(inc[v]):
                stack.pop()
                continue
            stack[-1] = (v, i + 1)
            u, eid = inc[v][i]
            if not seen[u]:
                seen[u] = True
                parent[u] = v
                depth[u] = depth[v] + 1
                tree.add(eid)
                order.append(u)
                stack.append((u, 0))
    return parent, order, depth, tree


def feedback_edge_set(g):
    """Non-tree edges of a DFS spanning forest; size is m - n + #components."""
    _, _, _, tree = dfs_forest(g)
    return [e for i, e in enumerate(g.edges) if i not in tree]


def fes_number(g):
    return g.m - g.n + len(g.components())


def is_forest(g):
    return fes_number(g) == 0


def biconnected_components(g):
    """Blocks of ``g`` as lists of edge indices (isolated vertices give none).

    Iterative Hopcroft-Tarjan with an edge stack.  Parallel edges are told
    apart by index, so two parallel edges form one block of two edges.
    """
    n = g.n
    inc = [[] for _ in range(n)]
    for i, (u, v) in enumerate(g.edges):
        inc[u].append((v, i))
        inc[v].append((u, i))
    disc = [-1] * n
    low = [0] * n
    blocks = []
    timer = 0
    for r in range(n):
        if disc[r] != -1:
            continue
        disc[r] = low[r] = timer
        timer += 1
        estack = []
        stack = [(r, -1, 0)]
        while stack:
            v, pedge, i = stack[-1]
            if i < len(inc[v]):
                stack[-1] = (v, pedge, i + 1)
                u, eid = inc[v][i]
                if eid == pedge:
                    continue
                if disc[u] == -1:
                    disc[u] = low[u] = timer
                    timer += 1
                    estack.append(eid)
                    stack.append((u, eid, 0))
                elif disc[u] < disc[v]:
                    estack.append(eid)
                    low[v] = min(low[v], disc[u])
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] >= disc[p]:
                        block = []
                        while True:
                            e = estack.pop()
                            block.append(e)
                            if e == pedge:
                                break
                        blocks.append(block)
    return blocks


def bridges(g):
    """Indices of edges that lie on no cycle."""
    return [b[0] for b in biconnected_components(g) if len(b) == 1]


def min_vertex_cover(g, budget=None):
    """Minimum vertex cover by bounded search, or None if it exceeds ``budget``.

    Branches on a maximum-degree vertex ``v``: either ``v`` is in the cover or
    all of ``N(v)`` is.  Iterative deepening on the budget returns a minimum.
    """
    if budget is None:
        budget = g.n
    nbr = g.nbr_mask

    def search(alive, k):
        best_v, best_d = -1, 0
        rest = alive
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            d = popcount(nbr[v] & alive)
            if d > best_d:
                best_v, best_d = v, d
        if best_d == 0:
            return 0
        if k == 0:
            return None
        if best_d == 1:
            # every remaining component is a matching edge
            cover = 0
            rest = alive
            count = 0
            while rest:
                low = rest & -rest
                v = low.bit_length() - 1
                rest ^= low
                nb = nbr[v] & alive
                if nb and not (cover & (1 << v)) and not (cover & nb):
                    cover |= 1 << v
                    count += 1
            return cover if count <= k else None
        v = best_v
        r = search(alive & ~(1 << v), k - 1)
        if r is not None:
            return r | (1 << v)
        nb = nbr[v] & alive
        c = popcount(nb)
        if c <= k:
            r = search(alive & ~nb & ~(1 << v), k - c)
            if r is not None:
                return r | nb
        return None

    full = (1 << g.n) - 1
    for k in range(0, budget + 1):
        r = search(full, k)
        if r is not None:
            return set(from_mask(r))
    return None


# ---------------------------------------------------------------- generators

def path_graph(n, weights=None):
    return Graph(n, [(i, i + 1) for i in range(n - 1)], weights)


def cycle_graph(n, weights=None):
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)], weights)


def star_graph(leaves, weights=None):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)], weights)


def complete_graph(n, weights=None):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)], weights)


def gen_random(n, p, seed=0):
    """Erdos-Renyi graph G(n, p); deterministic for a fixed seed."""
    if not 0 <= p <= 1:
        raise InputError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, edges)


def gen_cactus(n, seed=0, cycle_bias=0.5, max_cycle=7):
    """Random connected cactus on ``n`` vertices.

    Grows from vertex 0 by attaching either a pendant edge or a new cycle
    through an existing vertex, so every edge lies on at most one cycle.
    """
    rng = random.Random(seed)
    if n <= 0:
        return Graph(0)
    edges = []
    count = 1
    while count < n:
        a = rng.randrange(count)
        room = n - count
        if room >= 2 and rng.random() < cycle_bias:
            length = rng.randint(3, min(max_cycle, room + 1))
            new = list(range(count, count + length - 1))
            count += length - 1
            ring = [a] + new
            for i in range(length):
                edges.append((ring[i], ring[(i + 1) % length]))
        else:
            edges.append((a, count))
            count += 1
    return Graph(n, edges)


def gen_random_weights(g, seed=0, low=1, high=9):
    rng = random.Random(seed)
    return g.with_weights([rng.randint(low, high) for _ in range(g.n)])


def _check_family(universe_size, family):
    if not family:
        raise InputError("family must be non-empty")
    for f in family:
        if not f:
            raise InputError("family members must be non-empty")
        for e in f:
            if not 0 <= e < universe_size:
                raise InputError("element %r outside universe of size %d" % (e, universe_size))


def gen_from_hitting_set(universe_size, family):
    """Dominating-set gadget for hitting set.

    Vertices ``0..u-1`` are the elements, ``u+j`` is the vertex of the j-th
    set, then ``x`` and ``y``.  Element u is joined to the vertex of every set
    containing it and to ``x``; ``x`` is joined to ``y``.  A minimum dominating
    set has size (minimum hitting set) + 1.
    """
    _check_family(universe_size, family)
    u = universe_size
    m = len(family)
    x, y = u + m, u + m + 1
    edges = []
    for j, f in enumerate(family):
        for e in sorted(set(f)):
            edges.append((e, u + j))
    for e in range(u):
        edges.append((e, x))
    edges.append((x, y))
    return Graph(u + m + 2, edges)


def gen_from_set_cover(universe_size, family):
    """Dominating-set gadget for set cover.

    Same vertex layout as :func:`gen_from_hitting_set`, but ``x`` is joined to
    every set vertex instead of every element.  A minimum dominating set has
    size (minimum set cover) + 1.
    """
    _check_family(universe_size, family)
    u = universe_size
    m = len(family)
    x, y = u + m, u + m + 1
    edges = []
    for j, f in enumerate(family):
        for e in sorted(set(f)):
            edges.append((e, u + j))
        edges.append((x, u + j))
    edges.append((x, y))
    return Graph(u + m + 2, edges)
