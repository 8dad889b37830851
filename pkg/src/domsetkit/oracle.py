"""Brute-force reference solvers.

Every exact solver in the package is tested against these.  They enumerate
all subsets of the free elements with a vectorized doubling scheme: the table
for subsets of the first ``i + 1`` free elements is the table for the first
``i`` elements, OR-ed (for coverage) or summed (for weight) with element ``i``.
"""

from dataclasses import dataclass
from typing import FrozenSet, Optional

import numpy as np

from .errors import ResourceError
from .graph import INF, is_dominating, to_mask

DOMINATING_CAP = 22
SET_SYSTEM_CAP = 16


@dataclass(frozen=True)
class OracleResult:
    weight: int
    witness: Optional[FrozenSet[int]]
    count: int = 0

    @property
    def feasible(self):
        return self.witness is not None


def _subset_tables(masks, weights, base_mask=0, base_weight=0):
    """Coverage mask and weight of every subset of ``masks`` (index = subset bits)."""
    k = len(masks)
    cov = np.empty(1 << k, dtype=np.int64)
    wt = np.empty(1 << k, dtype=np.int64)
    cov[0] = base_mask
    wt[0] = base_weight
    for i in range(k):
        lo, hi = 1 << i, 1 << (i + 1)
        np.bitwise_or(cov[:lo], masks[i], out=cov[lo:hi])
        np.add(wt[:lo], weights[i], out=wt[lo:hi])
    return cov, wt


def _pick(ok, wt):
    if not ok.any():
        return None, INF, 0
    cand = np.where(ok, wt, np.iinfo(np.int64).max)
    best = int(cand.min())
    idx = int(np.argmax(cand == best))
    count = int((cand == best).sum())
    return idx, best, count


def brute_min_dominating(g, weights=None, targets=None, forced_in=(), forbidden=(), cap=DOMINATING_CAP):
    """Minimum-weight ``S`` with forced_in <= S, S disjoint from forbidden, S dominating targets.

    Infeasible constraints give ``weight == INF`` and no witness.
    """
    if g.n > cap:
        raise ResourceError("n", g.n, cap)
    w = list(g.weights if weights is None else weights)
    targets = list(range(g.n)) if targets is None else sorted(set(targets))
    forced = sorted(set(forced_in))
    banned = set(forbidden)
    g.check_vertices(targets)
    g.check_vertices(forced)
    g.check_vertices(banned)
    if banned & set(forced):
        return OracleResult(INF, None, 0)
    free = [v for v in range(g.n) if v not in banned and v not in set(forced)]
    base = 0
    for v in forced:
        base |= g.closed_mask[v]
    cov, wt = _subset_tables([g.closed_mask[v] for v in free], [w[v] for v in free],
                             base, sum(w[v] for v in forced))
    tmask = to_mask(targets)
    ok = (cov & tmask) == tmask
    idx, best, count = _pick(ok, wt)
    if idx is None:
        return OracleResult(INF, None, 0)
    witness = frozenset(forced) | frozenset(free[i] for i in range(len(free)) if idx >> i & 1)
    assert is_dominating(g, witness, targets)
    return OracleResult(best, witness, count)


def rds_brute_force(g, exempt=(), cap=DOMINATING_CAP):
    """Minimum set dominating every vertex outside ``exempt`` (unit weights)."""
    ex = set(exempt)
    return brute_min_dominating(g.unweighted(), targets=[v for v in range(g.n) if v not in ex], cap=cap)


def brute_min_set_cover(universe_size, family, weights=None, target=None, cap=SET_SYSTEM_CAP):
    """Minimum-weight subfamily whose union contains ``target`` (default: all)."""
    m = len(family)
    if universe_size > cap:
        raise ResourceError("universe size", universe_size, cap)
    if m > cap:
        raise ResourceError("family size", m, cap)
    w = [1] * m if weights is None else list(weights)
    target = range(universe_size) if target is None else target
    tmask = to_mask(target)
    cov, wt = _subset_tables([to_mask(f) for f in family], w)
    idx, best, count = _pick((cov & tmask) == tmask, wt)
    if idx is None:
        return OracleResult(INF, None, 0)
    return OracleResult(best, frozenset(j for j in range(m) if idx >> j & 1), count)


def brute_min_hitting_set(universe_size, family, weights=None, cap=SET_SYSTEM_CAP):
    """Minimum-weight element set meeting every member of ``family``."""
    m = len(family)
    if universe_size > cap:
        raise ResourceError("universe size", universe_size, cap)
    if m > cap:
        raise ResourceError("family size", m, cap)
    w = [1] * universe_size if weights is None else list(weights)
    hits = [0] * universe_size
    for j, f in enumerate(family):
        for e in f:
            hits[e] |= 1 << j
    cov, wt = _subset_tables(hits, w)
    full = (1 << m) - 1
    idx, best, count = _pick(cov == full, wt)
    if idx is None:
        return OracleResult(INF, None, 0)
    return OracleResult(best, frozenset(e for e in range(universe_size) if idx >> e & 1), count)
