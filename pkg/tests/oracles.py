"""Slow reference implementations used only by the tests.

They rely on scalar ``Model.evaluate`` and ``itertools`` alone, never on
the vectorized batch paths or the solver modules under test.
"""

from fractions import Fraction
from itertools import combinations, product

from cfxlab.models import BinaryInstance


def cube(d):
    for bits in product((0, 1), repeat=d):
        yield BinaryInstance(bits)


def flips_between(x, z):
    return tuple(i for i, (a, b) in enumerate(zip(x.bits, z.bits)) if a != b)


def cost_of(cost, flips):
    if cost is None or cost.kind == "hamming":
        return Fraction(len(flips))
    return sum((Fraction(cost.weights[i]) for i in flips), Fraction(0))


def tie_key(value, flips):
    return (value, len(flips), tuple(sorted(flips)))


def counterfactual(models, x, target, cost=None, pi=None):
    """``(min cost, flips)`` over points reaching ``target`` on every model
    (and accepted by ``pi``), or None."""
    best = None
    for z in cube(x.dim):
        if any(Fraction(m.evaluate(z)) != Fraction(target) for m in models):
            continue
        if pi is not None and pi.evaluate(z) != 1:
            continue
        fl = flips_between(x, z)
        key = tie_key(cost_of(cost, fl), fl)
        if best is None or key < best:
            best = key
    return None if best is None else (best[0], best[2])


def wachter(model, x, y, lam, cost=None):
    best = None
    for z in cube(x.dim):
        fl = flips_between(x, z)
        obj = (Fraction(model.evaluate(z)) - Fraction(y)) ** 2 + Fraction(lam) * cost_of(cost, fl)
        key = tie_key(obj, fl)
        if best is None or key < best:
            best = key
    return best[0], best[2]


def sufficient(model, x, subset):
    label = Fraction(model.evaluate(x))
    for z in cube(x.dim):
        if all(z.bits[i] == x.bits[i] for i in subset) and Fraction(model.evaluate(z)) != label:
            return False
    return True


def min_sufficient_reason(model, x, accept=None):
    for size in range(x.dim + 1):
        for subset in combinations(range(x.dim), size):
            if not sufficient(model, x, subset):
                continue
            if accept is not None:
                completion = BinaryInstance(tuple(x.bits[i] if i in subset else 0 for i in range(x.dim)))
                if not accept(completion):
                    continue
            return subset
    return None


def max_change(model, x):
    label = Fraction(model.evaluate(x))
    return max(
        len(flips_between(x, z)) for z in cube(x.dim) if Fraction(model.evaluate(z)) == label
    )


def satisfiable(cnf):
    for values in product((False, True), repeat=cnf.num_vars):
        if all(any(values[abs(l) - 1] == (l > 0) for l in c) for c in cnf.clauses):
            return True
    return False


def output_table(model, d):
    """Exact outputs indexed by mask (bit ``i`` = feature ``i``), via scalar evaluation."""
    table = []
    for mask in range(1 << d):
        bits = tuple(mask >> i & 1 for i in range(d))
        table.append(Fraction(model.evaluate(BinaryInstance(bits))))
    return table


def msr_size_from_table(table, d, xm):
    """Smallest sufficient subset, by ascending size then lexicographic order."""
    label = table[xm]
    for size in range(d + 1):
        for subset in combinations(range(d), size):
            fixed = sum(1 << i for i in subset)
            free = [i for i in range(d) if not fixed >> i & 1]
            ok = True
            for values in product((0, 1), repeat=len(free)):
                z = xm & fixed
                for i, v in zip(free, values):
                    z |= v << i
                if table[z] != label:
                    ok = False
                    break
            if ok:
                return subset
    raise AssertionError("the full feature set is always sufficient")


def mca_from_table(table, d, xm):
    label = table[xm]
    return max(bin(z ^ xm).count("1") for z in range(1 << d) if table[z] == label)
