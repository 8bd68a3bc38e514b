"""Decode gadget inputs, verify the output dichotomy, and decide SAT by
solving the gadget's WACHTER instance exactly."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .._rational import format_fraction
from ..exceptions import InvariantViolation
from ..explain.enumerate import check_cap, iter_cube, masks_to_points, max_dim
from ..explain.solvers import solve_wachter
from ..models.base import BinaryInstance, apply_delta, as_instance
from ..validation import check_dim
from .build import build_gadget, relu_literal_index
from .cnf import Assignment


def decode_assignment(g, x):
    """Read an assignment off a gadget input without checking the output.

    ReLU inputs give ``x_i = True`` iff its positive-literal bit is on (so
    a variable with neither literal bit on defaults to False).
    """
    x = as_instance(x)
    check_dim(x.dim, g.dim)
    v = g.cnf.num_vars
    if g.kind == "relu":
        return Assignment({i: bool(x.bits[relu_literal_index(i)]) for i in range(1, v + 1)})
    return Assignment.from_bits(x.bits)


def encode_assignment(g, assignment):
    """Canonical gadget input for ``assignment``: exactly one literal bit
    per variable for ReLU, the variable bits themselves otherwise."""
    v = g.cnf.num_vars
    if g.kind == "relu":
        bits = [0] * (2 * v)
        for i in range(1, v + 1):
            bits[relu_literal_index(i if assignment.values[i] else -i)] = 1
        return BinaryInstance(tuple(bits))
    return BinaryInstance(assignment.to_bits())


def extract_assignment(g, x):
    """Satisfying assignment encoded by ``x`` if the gadget output is 0, else None."""
    x = as_instance(x)
    check_dim(x.dim, g.dim)
    if Fraction(g.regressor.evaluate(x)) != 0:
        return None
    a = decode_assignment(g, x)
    if not g.cnf.evaluate(a):
        raise InvariantViolation(f"gadget output 0 on {x} but the decoded assignment is not satisfying")
    return a


def _row(bits):
    return BinaryInstance(tuple(int(b) for b in bits))


def _decode_rows(g, X):
    """Vectorized :func:`decode_assignment` (rows of variable bits)."""
    return X[:, 0::2] if g.kind == "relu" else X


def _encode_rows(g, A):
    """Vectorized :func:`encode_assignment`."""
    if g.kind != "relu":
        return A.astype(np.uint8)
    E = np.empty((A.shape[0], 2 * A.shape[1]), dtype=np.uint8)
    E[:, 0::2] = A
    E[:, 1::2] = 1 - A
    return E


def _assignment_masks(v, mode, n, rng):
    if mode == "exhaustive":
        return np.arange(1 << v, dtype=np.int64)
    return rng.integers(0, 1 << v, size=n, dtype=np.int64)


def verify_gadget(g, cnf=None, mode="exhaustive", n=1000, seed=0, cap=None, max_listed=50):
    """Check the dichotomy properties over all (or ``n`` sampled) inputs.

    (a) output is 0 or at least ``M``; (b) output 0 decodes to a satisfying
    assignment; (c) every satisfying assignment's canonical encoding has
    output 0. Returns a JSON-ready report.
    """
    cnf = g.cnf if cnf is None else cnf
    model, M = g.regressor, g.M
    rng = np.random.default_rng(seed)
    violations, counts = [], {"a": 0, "b": 0, "c": 0}

    def record(prop, bits, out):
        counts[prop] += 1
        if len(violations) < max_listed:
            violations.append({"property": prop, "input": str(bits), "output": format_fraction(out)})

    if mode == "exhaustive":
        check_cap("gadget verification", g.dim, max_dim(cap))
        chunks = iter_cube(g.dim)
    elif mode == "sampled":
        masks = rng.integers(0, 1 << g.dim, size=n, dtype=np.int64) if g.dim < 63 else None
        if masks is None:
            X = rng.integers(0, 2, size=(n, g.dim), dtype=np.uint8)
            chunks = [(None, X)]
        else:
            chunks = [(masks, masks_to_points(masks, g.dim))]
    else:
        raise ValueError(f"unknown verification mode {mode!r}")
    checked = 0
    for _, X in chunks:
        vals, den = model._batch(X)
        checked += len(X)
        bad = np.nonzero((vals != 0) & (vals * M.denominator < M.numerator * den))[0]
        for r in bad:
            record("a", _row(X[r]), Fraction(int(vals[r]), den))
        zero = np.nonzero(vals == 0)[0]
        if len(zero):
            ok = cnf.evaluate_batch(_decode_rows(g, X[zero]))
            for r in zero[~ok]:
                record("b", _row(X[r]), Fraction(0))
    v = cnf.num_vars
    amasks = _assignment_masks(v, mode, n, rng)
    A = masks_to_points(amasks, v)
    sat = A[cnf.evaluate_batch(A)]
    sat_checked = len(sat)
    if sat_checked:
        E = _encode_rows(g, sat)
        vals, den = model._batch(E)
        for r in np.nonzero(vals != 0)[0]:
            record("c", _row(E[r]), Fraction(int(vals[r]), den))
    return {
        "kind": g.kind,
        "mode": mode,
        "dim": g.dim,
        "M": format_fraction(M),
        "inputs_checked": checked,
        "satisfying_assignments_checked": sat_checked,
        "violation_count": sum(counts.values()),
        "violations_by_property": counts,
        "violations": violations,
        "summary": f"{sum(counts.values())} violations",
    }


@dataclass(frozen=True)
class Reduction:
    satisfiable: bool
    assignment: object
    objective: Fraction
    M: Fraction
    witness: object
    certificate: dict


def reduce_sat(cnf, kind="relu", M=None, method="auto", max_dim=None):
    """Decide satisfiability of ``cnf`` through its gadget's exact WACHTER optimum."""
    g = build_gadget(cnf, kind, M)
    sol = solve_wachter(g.spec(), method=method, max_dim=max_dim)
    obj = sol.objective
    if obj <= g.sat_threshold:
        z = apply_delta(g.x_orig, sol.witness)
        a = extract_assignment(g, z)
        if a is None:
            raise InvariantViolation(f"objective {obj} <= (M-1)^2 but the gadget output is nonzero")
        return Reduction(True, a, obj, g.M, z, sol.certificate)
    if obj < g.unsat_threshold:
        raise InvariantViolation(f"objective {obj} falls strictly between (M-1)^2 and M^2")
    return Reduction(False, None, obj, g.M, None, sol.certificate)


def sat_via_cfe(cnf, gadget_kind="relu", M=None, **kwargs):
    """Satisfying assignment from the gadget optimum, or None if unsatisfiable."""
    return reduce_sat(cnf, gadget_kind, M, **kwargs).assignment
