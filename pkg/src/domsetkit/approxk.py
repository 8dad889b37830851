"""Approximation trading running time for ratio via subset guessing.

Every vertex set U of size at most floor(alpha * k) + 1 is tried as part of
the solution: U is contracted into an apex x adjacent to N(U), the rest is
covered greedily, and x is swapped back for U.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .errors import InputError, ResourceError
from .graph import Graph, is_dominating, require_simple
from .setcover import closed_neighborhood_instance, greedy_approx

SUBSET_CAP = 1_000_000


def parse_alpha(text):
    """Parse ``p/q`` (or a decimal) into a Fraction in [0, 1)."""
    try:
        alpha = Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise InputError("alpha must look like p/q, got %r" % (text,))
    if not 0 <= alpha < 1:
        raise InputError("alpha must lie in [0, 1)")
    return alpha


@dataclass
class TradeoffConfig:
    alpha: Fraction
    k: int
    max_subsets: int = SUBSET_CAP
    verbose: bool = False

    def __post_init__(self):
        self.alpha = parse_alpha(self.alpha) if not isinstance(self.alpha, Fraction) else self.alpha
        if not 0 <= self.alpha < 1:
            raise InputError("alpha must lie in [0, 1)")
        if self.k < 0:
            raise InputError("k must be a natural number")

    @property
    def guess_size(self):
        return int(self.alpha * self.k) + 1


@dataclass
class TradeoffReport:
    guess_size: int
    subsets_tried: int
    best_guess: tuple
    early_exit: bool
    iterations: list = field(default_factory=list)


def apex_graph(g, u):
    """G - U plus a new last vertex x joined to N(U) - U; returns ``(graph, ids)``."""
    rest, ids = g.remove_vertices(u)
    index = {v: i for i, v in enumerate(ids)}
    uset = set(u)
    attach = sorted({index[w] for v in u for w in g.adj[v] if w not in uset})
    x = rest.n
    return Graph(rest.n + 1, list(rest.edges) + [(w, x) for w in attach]), ids + [None]


def subset_count(n, size):
    return sum(comb(n, j) for j in range(min(size, n) + 1))


def approx_tradeoff(g, cfg):
    """Smallest of the sets (S'_U - x) + U over all guessed U; always dominating.

    Returns ``(solution, size, report)``.  Guesses are tried by increasing
    size; the search stops early once some guess U alone dominates, since no
    later guess can be smaller.
    """
    require_simple(g)
    size = min(cfg.guess_size, g.n)
    total = subset_count(g.n, size)
    if total > cfg.max_subsets:
        raise ResourceError("guessed subsets", total, cfg.max_subsets)
    best, best_u = None, ()
    tried = 0
    iterations = []
    early = False
    for j in range(size + 1):
        if best is not None and j > len(best):
            break
        for u in combinations(range(g.n), j):
            tried += 1
            h, ids = apex_graph(g, u)
            x = h.n - 1
            chosen, _ = greedy_approx(closed_neighborhood_instance(h.unweighted()))
            sol = frozenset(ids[v] for v in chosen if v != x) | frozenset(u)
            if cfg.verbose:
                iterations.append({"guess": list(u), "size": len(sol)})
            if best is None or len(sol) < len(best):
                best, best_u = sol, u
            if chosen == [x]:
                early = True
                break
        if early:
            break
    assert is_dominating(g, best)
    return best, len(best), TradeoffReport(size, tried, best_u, early, iterations)
