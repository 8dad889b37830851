"""Weighted set cover: the all-subsets table and the greedy approximation."""

from dataclasses import dataclass
from fractions import Fraction
from typing import List

import numpy as np

from .errors import InputError, ResourceError
from .graph import INF, to_mask

UNIVERSE_CAP = 25


@dataclass
class SetCoverInstance:
    universe_size: int
    sets: List[frozenset]
    weights: List[int]

    def __init__(self, universe_size, sets, weights=None):
        self.universe_size = universe_size
        self.sets = [frozenset(s) for s in sets]
        self.weights = [1] * len(self.sets) if weights is None else [int(w) for w in weights]
        if len(self.weights) != len(self.sets):
            raise InputError("one weight per set is required")
        for s in self.sets:
            for e in s:
                if not 0 <= e < universe_size:
                    raise InputError("element %r outside universe of size %d" % (e, universe_size))
        if any(w < 0 for w in self.weights):
            raise InputError("set weights must be natural numbers")

    def masks(self):
        return [to_mask(s) for s in self.sets]

    def is_coverable(self, target=None):
        need = to_mask(range(self.universe_size) if target is None else target)
        have = 0
        for m in self.masks():
            have |= m
        return need & ~have == 0


class GeneralizedTable:
    """Minimum-weight cover of every subset ``A`` of the universe.

    Subsets are bitmasks over the universe.  ``weight(A)`` is INF when some
    element of ``A`` lies in no set.
    """

    def __init__(self, inst, weight, choice):
        self.inst = inst
        self._weight = weight
        self._choice = choice
        self._masks = inst.masks()

    def weight(self, a):
        return int(self._weight[a])

    def subfamily(self, a):
        out = []
        while a:
            j = int(self._choice[a])
            if j < 0:
                return None
            out.append(j)
            a &= ~self._masks[j]
        return sorted(out)

    def __len__(self):
        return len(self._weight)


def _popcount_array(size, bits):
    ar = np.arange(size, dtype=np.int64)
    pc = np.zeros(size, dtype=np.int8)
    for i in range(bits):
        pc += ((ar >> i) & 1).astype(np.int8)
    return ar, pc


def solve_generalized(inst, cap=UNIVERSE_CAP):
    """Fill entry(A) = min over sets F meeting A of w(F) + entry(A - F), entry(empty) = 0.

    Subsets are processed layer by layer in order of size, since A - F is
    strictly smaller than A whenever F meets A.  Ties keep the smallest set id.
    """
    n = inst.universe_size
    if n > cap:
        raise ResourceError("universe size", n, cap)
    size = 1 << n
    weight = np.full(size, INF, dtype=np.int64)
    choice = np.full(size, -1, dtype=np.int32)
    weight[0] = 0
    ar, pc = _popcount_array(size, n)
    order = np.argsort(pc, kind="stable")
    bounds = np.searchsorted(pc[order], np.arange(n + 2))
    masks = inst.masks()
    for k in range(1, n + 1):
        a = order[bounds[k]:bounds[k + 1]]
        best = np.full(len(a), INF, dtype=np.int64)
        bestj = np.full(len(a), -1, dtype=np.int32)
        for j, (fm, wj) in enumerate(zip(masks, inst.weights)):
            if fm == 0:
                continue
            meets = (a & fm) != 0
            cand = np.minimum(weight[a & ~fm] + wj, INF)
            better = meets & (cand < best)
            best[better] = cand[better]
            bestj[better] = j
        weight[a] = best
        choice[a] = bestj
    return GeneralizedTable(inst, weight, choice)


def harmonic(s):
    return sum(Fraction(1, i) for i in range(1, s + 1))


def greedy_approx(inst, target=None):
    """Classic greedy: repeatedly take the set of least weight per newly covered element.

    Ties go to the smallest set id.  The result weighs at most H(s) times the
    optimum, where s is the largest set size.
    """
    need = set(range(inst.universe_size) if target is None else target)
    if not inst.is_coverable(need):
        raise InputError("instance is not coverable")
    chosen = []
    uncovered = set(need)
    while uncovered:
        best = None
        for j, s in enumerate(inst.sets):
            new = len(s & uncovered)
            if new == 0:
                continue
            w = inst.weights[j]
            if best is None or w * best[1] < best[2] * new:
                best = (j, new, w)
        j = best[0]
        chosen.append(j)
        uncovered -= inst.sets[j]
    return sorted(chosen), sum(inst.weights[j] for j in chosen)


def closed_neighborhood_instance(g, weights=None):
    """Set cover instance whose sets are the closed neighborhoods of ``g``."""
    return SetCoverInstance(g.n, [g.closed_neighborhood(v) for v in range(g.n)],
                            g.weights if weights is None else weights)


def greedy_dominating_set(g, weights=None):
    chosen, w = greedy_approx(closed_neighborhood_instance(g, weights))
    return set(chosen), w
