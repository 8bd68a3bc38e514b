from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cfxlab.exceptions import CapExceeded, InvalidSpec, ParseError
from cfxlab.gadgets import (
    Assignment,
    CnfFormula,
    GadgetInstance,
    brute_force_sat,
    build_atm_gadget,
    build_gadget,
    build_knn_gadget,
    build_relu_gadget,
    default_bigm,
    encode_assignment,
    extract_assignment,
    gadget_from_dict,
    gadget_to_dict,
    parse_dimacs,
    random_restricted_cnf,
    reduce_sat,
    sat_via_cfe,
    to_dimacs,
    verify_gadget,
)
from cfxlab.models import BinaryInstance, ReluNetwork, evaluate

FIG = CnfFormula(3, ((-1, 2, -3),))
ALL_SIGNS = CnfFormula(
    3, tuple(tuple(s * v for s, v in zip(signs, (1, 2, 3))) for signs in product((1, -1), repeat=3))
)
KINDS = ("relu", "atm", "knn")


# ---- DIMACS -----------------------------------------------------------------


def test_parse_example():
    cnf = parse_dimacs("p cnf 3 1\n-1 2 -3 0")
    assert cnf.num_vars == 3 and cnf.clauses == ((-1, 2, -3),)


@pytest.mark.parametrize(
    "text,msg",
    [
        ("p cnf 3 1\n1 1 2 0\n", "duplicate variable in clause"),
        ("p cnf 3 1\n1 2 0\n", "fewer than three literals"),
        ("p cnf 4 1\n1 2 3 4 0\n", "more than three literals"),
        ("p cnf 3 1\n1 -1 2 0\n", "duplicate variable in clause"),
        ("p cnf x 1\n1 2 3 0\n", "malformed header"),
        ("p dnf 3 1\n1 2 3 0\n", "malformed header"),
        ("1 2 3 0\n", "before the 'p cnf' header"),
        ("p cnf 3 2\n1 2 3 0\n", "declares 2 clauses"),
        ("p cnf 3 1\n1 2 5 0\n", "exceeds declared variable count"),
        ("p cnf 3 1\n1 2 3\n", "not terminated"),
        ("c only a comment\n", "missing 'p cnf' header"),
    ],
)
def test_parse_errors(text, msg):
    with pytest.raises(ParseError, match=msg):
        parse_dimacs(text)


def test_parse_comments_multiline_and_percent():
    text = "c hi\np cnf 4 2\n1 -2\n 3 0 2 3 -4 0\n%\n0\n"
    cnf = parse_dimacs(text)
    assert cnf.clauses == ((1, -2, 3), (2, 3, -4))
    assert parse_dimacs(to_dimacs(cnf)) == cnf


def test_brute_force_sat():
    assert brute_force_sat(ALL_SIGNS) is None
    a = brute_force_sat(FIG)
    assert FIG.evaluate(a)


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 8), st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_random_formulas_are_restricted(v, c, seed):
    cnf = random_restricted_cnf(v, c, seed)
    assert cnf.num_clauses == c
    assert all(len({abs(l) for l in cl}) == 3 for cl in cnf.clauses)
    assert (brute_force_sat(cnf) is not None) == oracles.satisfiable(cnf)


# ---- builders ---------------------------------------------------------------


def test_relu_gadget_shape():
    g = build_relu_gadget(FIG)
    net = g.regressor
    assert net.n_features == 6
    assert net.widths() == [4, 1]  # one clause neuron + three consistency neurons
    assert g.M == default_bigm(6) == 4


def test_relu_gadget_values():
    g = build_relu_gadget(FIG)
    M = g.M
    # x1=F, x2=T, x3=F: bits for not-x1, x2, not-x3
    assert evaluate(g.regressor, (0, 1, 1, 0, 0, 1)) == 0
    assert evaluate(g.regressor, (0,) * 6) >= M
    assert evaluate(g.regressor, (1, 1, 0, 0, 0, 0)) == M  # x1 bits clash; -x1 satisfies the clause


def test_atm_gadget_values():
    g = build_atm_gadget(FIG)
    assert evaluate(g.regressor, (0, 1, 0)) == 0
    assert evaluate(g.regressor, (1, 0, 1)) == g.M
    two = build_atm_gadget(CnfFormula(3, ((-1, 2, -3), (1, 2, 3))))
    assert evaluate(two.regressor, (0, 0, 0)) == two.M  # mean of {0, 2M}
    assert all(len(t.nodes) == 3 for t in two.regressor.trees)


def test_knn_gadget_values():
    g = build_knn_gadget(FIG)
    knn = g.regressor
    assert len(knn.vectors) == 8
    assert sum(1 for l in knn.labels if l != 0) == 1
    assert knn.k == 1
    assert evaluate(knn, (0, 1, 0)) == 0
    two = build_knn_gadget(CnfFormula(4, ((-1, 2, -3), (2, 3, 4))))
    assert evaluate(two.regressor, (1, 0, 1, 1)) == two.M


def test_bigm_validation():
    assert default_bigm(1) == 2
    assert default_bigm(9) == 4
    assert default_bigm(10) == 5
    with pytest.raises(InvalidSpec, match="invalid M"):
        build_relu_gadget(FIG, M=3)  # (3-1)^2 = 4 < 6
    g = build_relu_gadget(FIG, M=Fraction(7, 2))
    assert g.M == Fraction(7, 2)


@pytest.mark.parametrize("kind", KINDS)
def test_gadget_sizes_are_linear(kind):
    cnf = random_restricted_cnf(7, 13, 0)
    g = build_gadget(cnf, kind)
    if kind == "relu":
        assert g.regressor.widths() == [13 + 7, 1]
    elif kind == "atm":
        assert len(g.regressor.trees) == 13 and g.regressor.size() == 13 * 7
    else:
        assert len(g.regressor.vectors) == 8 * 13


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(KINDS), st.integers(3, 6), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_output_is_M_times_unsatisfied(kind, v, c, seed):
    cnf = random_restricted_cnf(v, c, seed)
    g = build_gadget(cnf, kind)
    for bits in product((0, 1), repeat=v):
        a = Assignment.from_bits(bits)
        assert evaluate(g.regressor, encode_assignment(g, a)) == g.M * cnf.unsatisfied(a)


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 7), st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_knn_strict_separation(v, c, seed):
    cnf = random_restricted_cnf(v, c, seed)
    knn = build_knn_gadget(cnf).regressor
    for bits in product((0, 1), repeat=v):
        d = [knn.sq_distance(bits, i) for i in range(len(knn.vectors))]
        groups = [d[8 * j : 8 * j + 8] for j in range(c)]
        nearest = [min(gr) for gr in groups]
        assert len(set(nearest)) == 1  # same base distance in every group
        for gr in groups:
            assert sorted(gr)[1] - sorted(gr)[0] >= 1


# ---- extraction, verification, reduction --------------------------------------


def test_extract_examples():
    g = build_relu_gadget(FIG)
    a = extract_assignment(g, (0, 0, 0, 0, 0, 1))  # only the not-x3 bit
    assert a == Assignment({1: False, 2: False, 3: False})
    assert FIG.evaluate(a)
    assert extract_assignment(g, (0,) * 6) is None
    ga = build_atm_gadget(FIG)
    assert extract_assignment(ga, (0, 1, 1)) == Assignment.from_bits((0, 1, 1))


@pytest.mark.parametrize("kind", KINDS)
def test_verify_clean(kind):
    rep = verify_gadget(build_gadget(FIG, kind))
    assert rep["summary"] == "0 violations"
    assert rep["inputs_checked"] == 2 ** (6 if kind == "relu" else 3)
    rep = verify_gadget(build_gadget(ALL_SIGNS, kind))
    assert rep["violation_count"] == 0 and rep["satisfying_assignments_checked"] == 0


def test_verify_reports_corruption():
    g = build_relu_gadget(FIG)
    (W, b), out = g.regressor.layers
    W = [list(r) for r in W]
    W[0][1] += 1
    bad = GadgetInstance("relu", FIG, ReluNetwork(6, ((W, b), out)), g.M)
    rep = verify_gadget(bad)
    assert rep["violation_count"] > 0
    assert {v["property"] for v in rep["violations"]} <= {"a", "b", "c"}


def test_verify_sampled_and_cap():
    g = build_relu_gadget(random_restricted_cnf(12, 20, 1))
    rep = verify_gadget(g, mode="sampled", n=500, seed=3)
    assert rep["inputs_checked"] == 500 and rep["violation_count"] == 0
    assert verify_gadget(g, mode="sampled", n=500, seed=3) == rep
    with pytest.raises(CapExceeded):
        verify_gadget(g, mode="exhaustive", cap=20)


@pytest.mark.parametrize("kind", KINDS)
def test_reduce_examples(kind):
    sat = reduce_sat(CnfFormula(3, ((1, 2, -3),)), kind)
    assert sat.satisfiable and sat.objective <= (sat.M - 1) ** 2
    assert CnfFormula(3, ((1, 2, -3),)).evaluate(sat.assignment)
    unsat = reduce_sat(ALL_SIGNS, kind)
    assert not unsat.satisfiable and unsat.objective >= unsat.M**2
    # only the all-true assignment satisfies these seven clauses
    seven = CnfFormula(3, tuple(c for c in ALL_SIGNS.clauses if c != (-1, -2, -3)))
    assert brute_force_sat(seven) == Assignment({1: True, 2: True, 3: True})
    assert sat_via_cfe(seven, kind) == Assignment({1: True, 2: True, 3: True})


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(KINDS), st.integers(3, 6), st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_reduction_soundness_property(kind, v, c, seed):
    cnf = random_restricted_cnf(v, c, seed)
    red = reduce_sat(cnf, kind)
    assert red.satisfiable == oracles.satisfiable(cnf)
    if red.satisfiable:
        assert cnf.evaluate(red.assignment)
        assert red.objective <= (red.M - 1) ** 2
    else:
        assert red.objective >= red.M**2


@pytest.mark.parametrize("kind", KINDS)
def test_gadget_json_round_trip(kind):
    g = build_gadget(FIG, kind)
    d = gadget_to_dict(g)
    assert d["kind"] == g.regressor.kind and "encoding" in d and d["gadget"]["kind"] == kind
    again = gadget_from_dict(d)
    assert gadget_to_dict(again) == d
