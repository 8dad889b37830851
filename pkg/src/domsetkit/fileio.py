"""Reading and writing graph, solution and compressed-instance files.

Graph files are line based and 1-based::

    c optional comment
    p ds <n> <m>
    e <u> <v>          one line per edge
    w <v> <weight>     optional, default weight 1
    m <v> ...          optional modulator
    x <v> ...          optional exempt set of a compressed instance
    s <v> ...          optional partial solution of a compressed instance

The ``s`` line uses the ids of the original graph, since the vertices of a
partial solution have been removed from the compressed instance.
"""

from dataclasses import dataclass, field
from typing import List, Optional

from .errors import ParseError
from .graph import Graph


@dataclass
class GraphFile:
    graph: Graph
    modulator: Optional[List[int]] = None
    exempt: Optional[List[int]] = None
    partial: Optional[List[int]] = None
    comments: List[str] = field(default_factory=list)


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError("line %d: expected integers, got %r" % (lineno, " ".join(tokens)))


def parse_graph(text):
    n = m = None
    edges = []
    weights = {}
    extra = {"m": None, "x": None, "s": None}
    comments = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if kind == "c":
            comments.append(line[1:].strip())
        elif kind == "p":
            if n is not None:
                raise ParseError("line %d: duplicate header" % lineno)
            if len(tok) != 4 or tok[1] != "ds":
                raise ParseError("line %d: header must be 'p ds <n> <m>'" % lineno)
            n, m = _ints(tok[2:], lineno)
            if n < 0 or m < 0:
                raise ParseError("line %d: negative counts in header" % lineno)
        elif n is None:
            raise ParseError("line %d: '%s' line before the header" % (lineno, kind))
        elif kind == "e":
            if len(tok) != 3:
                raise ParseError("line %d: edge line needs two endpoints" % lineno)
            u, v = _ints(tok[1:], lineno)
            for x in (u, v):
                if not 1 <= x <= n:
                    raise ParseError("line %d: vertex %d out of range 1..%d" % (lineno, x, n))
            if u == v:
                raise ParseError("line %d: self-loop" % lineno)
            edges.append((u - 1, v - 1))
        elif kind == "w":
            if len(tok) != 3:
                raise ParseError("line %d: weight line needs vertex and weight" % lineno)
            v, wt = _ints(tok[1:], lineno)
            if not 1 <= v <= n:
                raise ParseError("line %d: vertex %d out of range" % (lineno, v))
            if wt < 0:
                raise ParseError("line %d: negative weight" % lineno)
            weights[v - 1] = wt
        elif kind in extra:
            vs = _ints(tok[1:], lineno)
            # the partial solution names vertices of the original graph
            top = None if kind == "s" else n
            for v in vs:
                if v < 1 or (top is not None and v > top):
                    raise ParseError("line %d: vertex %d out of range" % (lineno, v))
            extra[kind] = (extra[kind] or []) + [v - 1 for v in vs]
        else:
            raise ParseError("line %d: unknown line type %r" % (lineno, kind))
    if n is None:
        raise ParseError("missing 'p ds' header")
    if len(edges) != m:
        raise ParseError("header announces %d edges, found %d" % (m, len(edges)))
    if len(set((min(e), max(e)) for e in edges)) != len(edges):
        raise ParseError("parallel edges are not allowed in graph files")
    w = [weights.get(v, 1) for v in range(n)]
    g = Graph(n, edges, w)
    return GraphFile(g, extra["m"], extra["x"], extra["s"], comments)


def read_graph(path):
    with open(path) as fh:
        return parse_graph(fh.read())


def format_graph(g, modulator=None, exempt=None, partial=None, comments=()):
    lines = ["c %s" % c for c in comments]
    edges = sorted((min(u, v), max(u, v)) for u, v in g.edges)
    lines.append("p ds %d %d" % (g.n, len(edges)))
    lines.extend("e %d %d" % (u + 1, v + 1) for u, v in edges)
    if g.is_weighted():
        lines.extend("w %d %d" % (v + 1, g.weights[v]) for v in range(g.n))
    for tag, vs in (("m", modulator), ("x", exempt), ("s", partial)):
        if vs is not None:
            lines.append(" ".join([tag] + [str(v + 1) for v in sorted(vs)]))
    return "\n".join(lines) + "\n"


def write_graph(path, g, **kw):
    with open(path, "w") as fh:
        fh.write(format_graph(g, **kw))


def parse_solution(text):
    """Vertex list from a solution file: 1-based ids, optional 's' prefix."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] == "s":
            tok = tok[1:]
        out.extend(v - 1 for v in _ints(tok, lineno))
    return out


def format_solution(vertices):
    return "s " + " ".join(str(v + 1) for v in sorted(vertices)) + "\n"
