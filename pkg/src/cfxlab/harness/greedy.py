"""Greedy bit-flip hill-climber for the WACHTER objective (baseline only)."""

from fractions import Fraction

from ..explain.costs import HAMMING
from ..models.base import BinaryInstance, Delta, as_instance


def greedy_wachter(model, x_orig, y, lam, cost=HAMMING, max_steps=None):
    """Repeatedly apply the single flip that lowers the objective most.

    Stops at a local minimum. Ties go to the lowest feature index. Returns
    ``(objective, Delta, steps)``.
    """
    x = as_instance(x_orig)
    y, lam = Fraction(y), Fraction(lam)
    flips = set()
    bits = list(x.bits)

    def objective(fl, b):
        h = Fraction(model.evaluate(BinaryInstance(tuple(b))))
        return (h - y) ** 2 + lam * cost(Delta(frozenset(fl)), x.dim)

    current = objective(flips, bits)
    steps = 0
    while max_steps is None or steps < max_steps:
        best = None
        for i in range(x.dim):
            bits[i] ^= 1
            fl = flips ^ {i}
            val = objective(fl, bits)
            bits[i] ^= 1
            if val < current and (best is None or val < best[0]):
                best = (val, i)
        if best is None:
            break
        current, i = best
        bits[i] ^= 1
        flips ^= {i}
        steps += 1
    return current, Delta(frozenset(flips)), steps
