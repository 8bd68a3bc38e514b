"""Exact solvers for every counterfactual and semi-factual problem kind.

Specialized polynomial algorithms are used where they exist (perceptron
and FBDD counterfactuals); everything else is solved by exhaustive
enumeration of ``{0,1}^d`` below a dimension cap, or by branch and bound
for large WACHTER instances.
"""

from fractions import Fraction
from itertools import combinations

import numpy as np

from .._rational import INT64_SAFE
from ..exceptions import CapExceeded, InvalidSpec, InvariantViolation
from ..models.base import BinaryInstance, Delta, apply_delta, as_instance
from ..models.diagrams import Fbdd
from ..models.linear import Perceptron
from ..validation import check_dim
from .bnb import wachter_branch_and_bound
from .enumerate import (
    DEFAULT_MSR_MAX_DIM,
    CubeSearch,
    check_cap,
    cube_table,
    iter_cube,
    max_dim as resolve_cap,
    popcount,
)
from .fast import fbdd_cf_fast, perceptron_mcr_fast
from .problem import PartialInstance, Solution

# WACHTER instances up to this many features are enumerated even when
# branch and bound is available; the vectorized sweep is faster there.
ENUMERATE_UP_TO = 16


def _require_kind(spec, *kinds):
    if spec.kind not in kinds:
        raise InvalidSpec(f"expected a {' or '.join(kinds)} problem, got {spec.kind!r}")


def _check_models(spec):
    for m in spec.models:
        m.check_valid()
        check_dim(spec.x_orig.dim, m.dim, "x_orig")


def _equals(vals, den, target):
    target = Fraction(target)
    return vals * target.denominator == target.numerator * den


def _cost_values(X, xb, cost):
    w, wden = cost.scaled(X.shape[1])
    F = (X ^ xb[None, :]).astype(w.dtype)
    return F @ w, wden


def _enumerate_cf(spec, cap, constraints):
    """Minimum-cost flip set whose point satisfies every ``(model, target)``."""
    x = spec.x_orig
    cap = resolve_cap(cap)
    check_cap(f"{spec.kind} enumeration", x.dim, cap)
    xb = x.to_array()
    search = CubeSearch(x.to_mask())
    wden = 1
    for masks, X in iter_cube(x.dim):
        feasible = np.ones(len(masks), dtype=bool)
        for model, target in constraints:
            vals, den = model._batch(X)
            feasible &= _equals(vals, den, target)
        costs, wden = _cost_values(X, xb, spec.cost)
        search.offer(masks, costs, feasible)
    cert = {"method": "enumeration", "examined": search.examined}
    if not search.found:
        return None, cert
    delta = Delta.from_mask(search.best_mask ^ search.x_mask)
    return (delta, Fraction(int(search.best_value), wden)), cert


def _bounded(spec, result, cert):
    if result is None:
        return Solution(spec.kind, False, certificate=cert)
    delta, c = result
    if spec.k is not None and c > spec.k:
        cert = dict(cert, min_cost=f"{c.numerator}/{c.denominator}")
        return Solution(spec.kind, False, certificate=cert)
    return Solution(spec.kind, True, delta, c, cert)


def _fast_route(spec):
    m = spec.model
    if isinstance(m, Perceptron) and spec.cost.kind == "hamming" and spec.target in (0, 1):
        return "perceptron"
    if isinstance(m, Fbdd):
        return "fbdd"
    return None


def _counterfactual(spec, method, cap):
    _check_models(spec)
    route = _fast_route(spec) if method in ("auto", "fast") else None
    if method == "fast" and route is None:
        raise InvalidSpec("no specialized algorithm for this model and cost")
    if route == "perceptron":
        sol = perceptron_mcr_fast(spec.model, spec.x_orig, spec.target)
    elif route == "fbdd":
        sol = fbdd_cf_fast(spec.model, spec.x_orig, spec.target, spec.cost)
    else:
        result, cert = _enumerate_cf(spec, cap, [(spec.model, spec.target)])
        return _bounded(spec, result, cert)
    result = (sol.witness, sol.objective) if sol.feasible else None
    return _bounded(spec, result, sol.certificate)


def solve_classic_cf(spec, method="auto", max_dim=None):
    """Minimum-cost ``delta`` with ``h(x_orig ^ delta) == target``."""
    _require_kind(spec, "classic-cf")
    return _counterfactual(spec, method, max_dim)


def solve_mcr(spec, method="auto", max_dim=None):
    """Decide whether a counterfactual of cost at most ``k`` exists."""
    _require_kind(spec, "mcr")
    return _counterfactual(spec, method, max_dim)


def solve_robust_cf(spec, max_dim=None):
    """Cheapest flip set valid for every model in ``spec.model_set``."""
    _require_kind(spec, "robust-cf")
    _check_models(spec)
    result, cert = _enumerate_cf(spec, max_dim, [(m, spec.target) for m in spec.model_set])
    return _bounded(spec, result, cert)


def solve_plausible_mcr(spec, max_dim=None):
    """MCR with the extra constraint ``pi(x_orig ^ delta) == 1``."""
    _require_kind(spec, "plausible-mcr")
    _check_models(spec)
    result, cert = _enumerate_cf(spec, max_dim, [(spec.model, spec.target), (spec.pi, 1)])
    return _bounded(spec, result, cert)


def wachter_objective(spec, delta):
    """Exact ``(h(x ^ delta) - y)**2 + lam * cost(delta)``."""
    h = Fraction(spec.model.evaluate(apply_delta(spec.x_orig, delta)))
    return (h - spec.target) ** 2 + spec.lam * spec.cost(delta)


def _wachter_enumerate(spec, cap):
    x = spec.x_orig
    cap = resolve_cap(cap)
    check_cap("wachter enumeration", x.dim, cap)
    xb = x.to_array()
    y, lam = spec.target, spec.lam
    search = CubeSearch(x.to_mask())
    scale = None
    for masks, X in iter_cube(x.dim):
        vals, den = spec.model._batch(X)
        costs, wden = _cost_values(X, xb, spec.cost)
        # objective * den^2 * y.den^2 * lam.den * wden, as exact integers
        hmax = int(np.abs(vals).max()) if len(vals) else 0
        cmax = int(costs.max()) if len(costs) else 0
        bound = (hmax * y.denominator + abs(y.numerator) * den) ** 2 * lam.denominator * wden
        bound += lam.numerator * cmax * den * den * y.denominator**2
        if bound >= INT64_SAFE:
            vals, costs = vals.astype(object), costs.astype(object)
        diff = vals * y.denominator - y.numerator * den
        obj = diff * diff * (lam.denominator * wden) + costs * (lam.numerator * den * den * y.denominator**2)
        s = den * den * y.denominator**2 * lam.denominator * wden
        if scale is None:
            scale = s
        elif s != scale:
            raise InvariantViolation("inconsistent batch denominators")
        search.offer(masks, obj)
    best = Fraction(int(search.best_value), scale)
    cert = {"method": "enumeration", "examined": search.examined}
    return Delta.from_mask(search.best_mask ^ search.x_mask), best, cert


def solve_wachter(spec, method="auto", max_dim=None, node_limit=None):
    """Exact minimizer of the WACHTER objective (squared loss + lam * cost).

    ``method`` is ``"enumerate"``, ``"bnb"`` (branch and bound with interval
    bounds, no dimension cap) or ``"auto"``, which enumerates small inputs
    and switches to branch and bound above :data:`ENUMERATE_UP_TO`
    features.
    """
    _require_kind(spec, "wachter")
    _check_models(spec)
    d = spec.x_orig.dim
    if method == "auto":
        method = "enumerate" if d <= ENUMERATE_UP_TO else "bnb"
    if method == "enumerate":
        delta, obj, cert = _wachter_enumerate(spec, max_dim)
    elif method == "bnb":
        obj, mask, nodes = wachter_branch_and_bound(
            spec.model, spec.x_orig, spec.target, spec.lam, spec.cost, node_limit=node_limit
        )
        delta = Delta.from_mask(mask)
        cert = {"method": "branch-and-bound", "examined": nodes}
    else:
        raise InvalidSpec(f"unknown wachter method {method!r}")
    return Solution("wachter", True, delta, obj, cert)


def check_sufficiency(model, x_orig, subset, max_dim=None):
    """True iff fixing ``subset`` to its values in ``x_orig`` forces the output.

    Enumerates all ``2**(d - |subset|)`` completions of the free features.
    """
    x = as_instance(x_orig)
    check_dim(x.dim, model.dim)
    subset = sorted(set(int(i) for i in subset))
    if any(not 0 <= i < x.dim for i in subset):
        raise IndexError("subset index out of range")
    free = [i for i in range(x.dim) if i not in subset]
    cap = resolve_cap(max_dim)
    if len(free) > cap:
        raise CapExceeded("sufficiency completions", len(free), cap)
    label = Fraction(model.evaluate(x))
    base = x.to_array()
    for masks, F in iter_cube(len(free)) if free else [(None, np.zeros((1, 0), dtype=np.uint8))]:
        X = np.repeat(base[None, :], len(F), axis=0)
        if free:
            X[:, free] = F
        vals, den = model._batch(X)
        if not np.all(_equals(vals, den, label)):
            return False
    return True


def _counter_examples(model, x, cap):
    """Flip masks (relative to ``x``) of every point whose output differs."""
    table, den = cube_table(model, "MSR enumeration", cap)
    xm = x.to_mask()
    label = table[xm]
    bad = np.nonzero(table != label)[0].astype(np.int64)
    return bad ^ xm


def _msr_search(spec, cap, accept=None):
    x = spec.x_orig
    d = x.dim
    cap = resolve_cap(cap, DEFAULT_MSR_MAX_DIM)
    diffs = _counter_examples(spec.model, x, cap)
    xm = x.to_mask()
    examined = 0
    limit = d if spec.k is None else min(d, int(spec.k.__floor__()))
    for size in range(0, limit + 1):
        for subset in combinations(range(d), size):
            examined += 1
            s = sum(1 << i for i in subset)
            if len(diffs) and not np.all((diffs & s) != 0):
                continue
            if accept is not None and not accept(xm & s):
                continue
            return subset, examined
    return None, examined


def _semifactual_solution(spec, subset, examined, x):
    cert = {"method": "subset-enumeration", "examined": examined}
    if subset is None:
        return Solution(spec.kind, False, certificate=cert)
    return Solution(
        spec.kind, True, PartialInstance.restrict(x, subset), Fraction(len(subset)), cert
    )


def solve_msr(spec, max_dim=None):
    """Minimum sufficient reason: the smallest feature subset whose values in
    ``x_orig`` force the model's output for every completion.

    Subsets are tried by ascending size (lexicographic within a size); a
    subset is sufficient iff it intersects the flip set of every point with
    a different output. Feasible iff the minimum size is at most ``k``
    (always, when ``k`` is omitted).
    """
    _require_kind(spec, "msr")
    _check_models(spec)
    subset, examined = _msr_search(spec, max_dim)
    return _semifactual_solution(spec, subset, examined, spec.x_orig)


def solve_plausible_msr(spec, max_dim=None):
    """MSR whose canonical completion (unassigned features set to 0) is
    accepted by ``pi``."""
    _require_kind(spec, "plausible-msr")
    _check_models(spec)
    pi_table, pi_den = cube_table(
        spec.pi, "MSR enumeration", resolve_cap(max_dim, DEFAULT_MSR_MAX_DIM)
    )

    def accept(mask):
        return pi_table[mask] == pi_den

    subset, examined = _msr_search(spec, max_dim, accept)
    return _semifactual_solution(spec, subset, examined, spec.x_orig)


def solve_mca(spec, max_dim=None):
    """Maximum change allowed: the farthest (Hamming) point with the same output.

    Feasible iff that distance is at least ``k`` (always, without ``k``).
    """
    _require_kind(spec, "mca")
    _check_models(spec)
    x = spec.x_orig
    cap = resolve_cap(max_dim)
    check_cap("mca enumeration", x.dim, cap)
    label = Fraction(spec.model.evaluate(x))
    search = CubeSearch(x.to_mask())
    for masks, X in iter_cube(x.dim):
        vals, den = spec.model._batch(X)
        same = _equals(vals, den, label)
        dist = popcount(masks ^ search.x_mask)
        search.offer(masks, -dist, same)
    best = -int(search.best_value)
    cert = {"method": "enumeration", "examined": search.examined}
    if spec.k is not None and best < spec.k:
        return Solution("mca", False, certificate=dict(cert, max_distance=best))
    witness = BinaryInstance.from_mask(search.best_mask, x.dim)
    return Solution("mca", True, witness, Fraction(best), cert)


def enumerate_counterfactuals(model, x_orig, target, max_dim=None):
    """Stream every flip set reaching ``target`` (in ascending mask order)."""
    x = as_instance(x_orig)
    check_dim(x.dim, model.dim)
    cap = resolve_cap(max_dim)
    check_cap("counterfactual enumeration", x.dim, cap)
    xm = x.to_mask()
    for masks, X in iter_cube(x.dim):
        vals, den = model._batch(X)
        for m in masks[_equals(vals, den, target)]:
            yield Delta.from_mask(int(m) ^ xm)


SOLVERS = {
    "classic-cf": solve_classic_cf,
    "mcr": solve_mcr,
    "wachter": solve_wachter,
    "robust-cf": solve_robust_cf,
    "plausible-mcr": solve_plausible_mcr,
    "msr": solve_msr,
    "plausible-msr": solve_plausible_msr,
    "mca": solve_mca,
}


def solve(spec, **kwargs):
    """Dispatch ``spec`` to the solver for its kind."""
    return SOLVERS[spec.kind](spec, **kwargs)
