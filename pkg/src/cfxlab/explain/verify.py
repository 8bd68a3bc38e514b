"""Independent re-check of a Solution against its ProblemSpec.

Uses only scalar ``Model.evaluate`` and :class:`~fractions.Fraction`
arithmetic, never the vectorized paths used by the solvers.
"""

from fractions import Fraction
from itertools import product

from ..models.base import BinaryInstance, Delta, apply_delta
from .problem import PartialInstance


def _same(a, b):
    return Fraction(a) == Fraction(b)


def _sufficient(model, x, support):
    label = model.evaluate(x)
    free = [i for i in range(x.dim) if i not in support]
    for values in product((0, 1), repeat=len(free)):
        bits = list(x.bits)
        for i, v in zip(free, values):
            bits[i] = v
        if not _same(model.evaluate(BinaryInstance(tuple(bits))), label):
            return False
    return True


def verify_solution(spec, sol):
    """List every constraint of ``spec`` that ``sol`` violates (empty if valid).

    Infeasible solutions are not checked for optimality; only feasible
    witnesses and their reported objective are re-derived.
    """
    problems = []
    if sol.kind != spec.kind:
        problems.append(f"solution kind {sol.kind!r} does not match {spec.kind!r}")
        return problems
    if not sol.feasible:
        if sol.witness is not None:
            problems.append("infeasible solution carries a witness")
        return problems
    x = spec.x_orig
    w = sol.witness
    kind = spec.kind
    if kind in ("msr", "plausible-msr"):
        if not isinstance(w, PartialInstance):
            return ["witness is not a partial instance"]
        if any(x.bits[i] != v for i, v in w.assigned.items()):
            problems.append("partial instance disagrees with x_orig")
        if not _sufficient(spec.model, x, set(w.support)):
            problems.append("fixed features are not sufficient")
        if spec.k is not None and len(w) > spec.k:
            problems.append("support larger than k")
        if kind == "plausible-msr" and spec.pi.evaluate(w.canonical_completion()) != 1:
            problems.append("pi rejects the canonical completion")
        if sol.objective != len(w):
            problems.append("objective is not the support size")
        return problems
    if kind == "mca":
        if not isinstance(w, BinaryInstance):
            return ["witness is not an instance"]
        if not _same(spec.model.evaluate(w), spec.model.evaluate(x)):
            problems.append("witness changes the output")
        dist = sum(a != b for a, b in zip(w.bits, x.bits))
        if spec.k is not None and dist < spec.k:
            problems.append("distance below k")
        if sol.objective != dist:
            problems.append("objective is not the Hamming distance")
        return problems
    if not isinstance(w, Delta):
        return ["witness is not a flip set"]
    z = apply_delta(x, w)
    cost = spec.cost(w)
    if kind == "wachter":
        obj = (Fraction(spec.model.evaluate(z)) - spec.target) ** 2 + spec.lam * cost
        if obj != sol.objective:
            problems.append(f"objective {sol.objective} does not match recomputed {obj}")
        return problems
    for m in spec.models if kind == "robust-cf" else [spec.model]:
        if m is spec.pi:
            continue
        if not _same(m.evaluate(z), spec.target):
            problems.append("witness misses the target output")
    if kind == "plausible-mcr" and spec.pi.evaluate(z) != 1:
        problems.append("pi rejects the counterfactual")
    if spec.k is not None and cost > spec.k:
        problems.append("cost exceeds k")
    if sol.objective != cost:
        problems.append(f"objective {sol.objective} does not match cost {cost}")
    return problems
