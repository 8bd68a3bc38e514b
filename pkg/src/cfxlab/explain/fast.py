"""Polynomial-time counterfactual algorithms for perceptrons and FBDDs."""

from fractions import Fraction

from ..models.base import Delta, as_instance
from ..models.diagrams import Fbdd
from ..models.linear import Perceptron
from ..validation import check_dim
from .costs import HAMMING, CostFunction
from .problem import Solution


def _perceptron_gains(perceptron, bits, target):
    """Per-feature progress towards ``target`` when that bit is flipped."""
    gains = []
    for i, (w, b) in enumerate(zip(perceptron.weights, bits)):
        change = -w if b else w  # score change caused by flipping bit i
        gains.append(change if target == 1 else -change)
    return gains


def perceptron_mcr_fast(perceptron, x_orig, y_cf, k=None):
    """Minimum number of bit flips moving a perceptron to class ``y_cf``.

    Only flips that move the score towards the target can appear in a
    minimum flip set, so the optimum size is the shortest prefix of the
    helpful gains sorted in decreasing order that crosses the threshold.
    The returned witness is the lexicographically smallest set of that size.
    """
    if not isinstance(perceptron, Perceptron):
        raise TypeError("perceptron_mcr_fast needs a Perceptron")
    x = as_instance(x_orig)
    check_dim(x.dim, perceptron.dim)
    y = int(y_cf)
    score = perceptron.score(x.bits)
    cert = {"method": "perceptron-greedy", "examined": perceptron.dim}

    def reached(total_gain):
        s = score + total_gain if y == 1 else score - total_gain
        return (s > 0) if y == 1 else (s <= 0)

    if y not in (0, 1):
        return Solution("mcr" if k is not None else "classic-cf", False, certificate=cert)
    if reached(Fraction(0)):
        m, flips = 0, ()
    else:
        gains = _perceptron_gains(perceptron, x.bits, y)
        helpful = [i for i, g in enumerate(gains) if g > 0]
        ranked = sorted((gains[i] for i in helpful), reverse=True)
        total, m = Fraction(0), None
        for size, g in enumerate(ranked, 1):
            total += g
            if reached(total):
                m = size
                break
        if m is None:
            return Solution("mcr" if k is not None else "classic-cf", False, certificate=cert)
        flips, chosen_gain = [], Fraction(0)
        for slot in range(m):
            rest = m - slot - 1
            start = flips[-1] + 1 if flips else 0
            pool = [i for i in helpful if i >= start]
            for pos, i in enumerate(pool):
                later = sorted((gains[j] for j in pool[pos + 1 :]), reverse=True)
                if len(later) < rest:
                    break
                if reached(chosen_gain + gains[i] + sum(later[:rest], Fraction(0))):
                    flips.append(i)
                    chosen_gain += gains[i]
                    break
        flips = tuple(flips)
    kind = "classic-cf" if k is None else "mcr"
    cost = Fraction(m)
    feasible = k is None or cost <= k
    return Solution(
        kind,
        feasible,
        Delta(frozenset(flips)) if feasible else None,
        cost if feasible else None,
        cert,
    )


def fbdd_cf_fast(fbdd, x_orig, y_cf, cost=HAMMING, k=None):
    """Cheapest counterfactual for an FBDD by dynamic programming on the DAG.

    A root-to-leaf path fixes exactly the variables it tests (each at most
    once, by read-once); untested variables keep their original values. The
    cheapest path to a ``y_cf`` leaf therefore costs the summed weight of
    its forced disagreements with ``x_orig``.
    """
    if not isinstance(fbdd, Fbdd):
        raise TypeError("fbdd_cf_fast needs an Fbdd or DecisionTree")
    fbdd.check_valid()
    x = as_instance(x_orig)
    check_dim(x.dim, fbdd.dim)
    if cost is None:
        cost = HAMMING
    weights = cost.weight_vector(fbdd.dim)
    target = Fraction(y_cf)
    best = {}
    order = fbdd._topological()
    for nid in order:
        if nid in fbdd.leaves:
            best[nid] = (Fraction(0), 0, ()) if fbdd.leaves[nid] == target else None
            continue
        var, lo, hi = fbdd.nodes[nid]
        options = []
        for value, child in ((0, lo), (1, hi)):
            sub = best[child]
            if sub is None:
                continue
            c, size, flips = sub
            if value != x.bits[var]:
                options.append((c + weights[var], size + 1, tuple(sorted(flips + (var,)))))
            else:
                options.append(sub)
        best[nid] = min(options) if options else None
    kind = "classic-cf" if k is None else "mcr"
    cert = {"method": "fbdd-dp", "examined": len(order)}
    root = best[fbdd.root]
    if root is None:
        return Solution(kind, False, certificate=cert)
    c, _, flips = root
    feasible = k is None or c <= k
    if not feasible:
        return Solution(kind, False, certificate=cert)
    return Solution(kind, True, Delta(frozenset(flips)), c, cert)
