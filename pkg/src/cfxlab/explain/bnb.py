"""Exact branch and bound for the WACHTER objective over bit flips.

Minimizes ``(h(x ^ delta) - y)**2 + lam * cost(delta)`` by depth-first
search over features in index order. Every node fixes a prefix of the
features; its *default completion* keeps all remaining features at their
original values. Nodes are pruned with the model's sound output interval
(``Model.bounds``) together with the cost already spent, and a second
test that charges at least one more flip for every non-default
completion. Branching tries "flip" before "keep", which visits
completions in lexicographic order of their flip sets.
"""

from fractions import Fraction
import sys

import numpy as np

from ..models.base import as_instance
from .enumerate import flip_key


def _loss_lower(lo, hi, y):
    if lo <= y <= hi:
        return Fraction(0)
    gap = lo - y if lo > y else y - hi
    return gap * gap


def wachter_branch_and_bound(model, x_orig, y, lam, cost, node_limit=None):
    """Return ``(objective, flip_mask, nodes)`` for the exact optimum."""
    x = as_instance(x_orig)
    d = model.dim
    y = Fraction(y)
    lam = Fraction(lam)
    weights = cost.weight_vector(d)
    suffix_min = [Fraction(0)] * (d + 1)
    running = None
    for i in range(d - 1, -1, -1):
        running = weights[i] if running is None else min(running, weights[i])
        suffix_min[i] = running
    xb = np.array(x.bits, dtype=np.uint8)
    point = xb.copy()
    lo = np.zeros(d, dtype=np.uint8)
    hi = np.ones(d, dtype=np.uint8)

    def exact(pt):
        vals, den = model._batch(pt[None, :])
        h = Fraction(int(vals[0]), den)
        return (h - y) ** 2

    best = [exact(point), 0, 0]  # objective, flip mask, flip count
    nodes = [0]

    def better(value, mask, size):
        if value != best[0]:
            return value < best[0]
        return flip_key(mask) < flip_key(best[1])

    def visit(i, spent, mask, size, fresh):
        nodes[0] += 1
        if node_limit is not None and nodes[0] > node_limit:
            raise RuntimeError("branch and bound node limit reached")
        b_lo, b_hi = model.bounds(lo, hi)
        bound = lam * spent + _loss_lower(b_lo, b_hi, y)
        # ties can only be won by strictly smaller flip sets
        if bound > best[0] or (bound == best[0] and size >= best[2]):
            return
        if fresh:
            value = exact(point) + lam * spent
            if better(value, mask, size):
                best[:] = [value, mask, size]
        if i == d:
            return
        # any other completion flips at least one more feature
        ahead = bound + lam * suffix_min[i]
        if ahead > best[0] or (ahead == best[0] and size + 1 >= best[2]):
            return
        orig = xb[i]
        lo[i] = hi[i] = point[i] = 1 - orig
        visit(i + 1, spent + weights[i], mask | (1 << i), size + 1, True)
        lo[i] = hi[i] = point[i] = orig
        visit(i + 1, spent, mask, size, False)
        lo[i], hi[i] = 0, 1

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * d + 100))
    try:
        visit(0, Fraction(0), 0, 0, False)
    finally:
        sys.setrecursionlimit(limit)
    return best[0], best[1], nodes[0]
