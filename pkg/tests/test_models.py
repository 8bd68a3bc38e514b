import json
import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfxlab.exceptions import DimensionMismatch, InvalidModel, ParseError
from cfxlab.harness.generators import random_model, random_relu, random_relu_ensemble
from cfxlab.models import (
    AdditiveTreeModel,
    BinaryInstance,
    Delta,
    DecisionList,
    DecisionTree,
    Ensemble,
    Fbdd,
    KnnRegressor,
    Perceptron,
    ReluNetwork,
    apply_delta,
    evaluate,
    flatten_ensemble,
    validate,
)
from cfxlab.models.ensemble import pad_network
from cfxlab.models.io import dumps_model, loads_model, model_from_dict, model_to_dict

FAMILIES = ("perceptron", "fbdd", "dt", "dl", "relu-classifier", "relu", "knn", "atm")


def all_points(d):
    return [BinaryInstance(b) for b in product((0, 1), repeat=d)]


# ---- evaluate ---------------------------------------------------------------


def test_single_node_fbdd(identity_fbdd):
    assert evaluate(identity_fbdd, (1,)) == 1
    assert evaluate(identity_fbdd, (0,)) == 0


def test_perceptron_example(perceptron):
    assert evaluate(perceptron, (1, 0, 0)) == 1
    # score = 3x1 - 2x2 + x3 - 1 > 0, checked on all eight inputs
    for x in all_points(3):
        s = 3 * x[0] - 2 * x[1] + x[2] - 1
        assert evaluate(perceptron, x) == int(s > 0)


def test_perceptron_threshold_is_strict():
    assert evaluate(Perceptron((1,), -1), (1,)) == 0


def test_knn_exact_match_is_nearest():
    knn = KnnRegressor(((0, 0), (1, 1)), (0, 10), 1)
    assert evaluate(knn, (0, 0)) == 0
    assert evaluate(knn, (1, 1)) == 10


def test_knn_ties_take_lowest_index():
    # (0,1) is at distance 1 from both stored vectors
    knn = KnnRegressor(((0, 0), (1, 1)), (3, 10), 1)
    assert evaluate(knn, (0, 1)) == 3
    knn = KnnRegressor(((1, 1), (0, 0)), (10, 3), 1)
    assert evaluate(knn, (0, 1)) == 10


def test_knn_returns_mean_of_k_labels():
    knn = KnnRegressor(((0, 0), (0, 1), (1, 1)), (1, 2, 4), 2)
    assert evaluate(knn, (0, 0)) == Fraction(3, 2)


def test_relu_exact_rationals():
    net = ReluNetwork(2, (([[Fraction(1, 3), Fraction(1, 3)]], [Fraction(-1, 3)]), ([[1]], [0])))
    assert evaluate(net, (1, 1)) == Fraction(1, 3)
    assert evaluate(net, (0, 0)) == 0


def test_relu_classifier_threshold():
    net = ReluNetwork(1, (([[1]], [0]), ([[1]], [0])), classifier=True)
    assert evaluate(net, (0,)) == 0
    assert evaluate(net, (1,)) == 1


def test_decision_list_first_match():
    dl = DecisionList(2, ((((0, 1),), 1), (((1, 1),), 0)), default=1)
    assert evaluate(dl, (1, 1)) == 1
    assert evaluate(dl, (0, 1)) == 0
    assert evaluate(dl, (0, 0)) == 1


def test_additive_trees_average():
    t1 = DecisionTree(1, 0, {0: (0, 1, 2)}, {1: 0, 2: 4})
    t2 = DecisionTree(1, 0, {}, {0: 2})
    assert evaluate(AdditiveTreeModel((t1, t2)), (1,)) == 3


def test_majority_ties_go_to_zero():
    one = Perceptron((1,), 0)
    zero = Perceptron((-1,), 0)
    assert evaluate(Ensemble((one, zero), "majority"), (1,)) == 0
    assert evaluate(Ensemble((one, one, zero), "majority"), (1,)) == 1


def test_dimension_mismatch(perceptron):
    with pytest.raises(DimensionMismatch, match="dimension mismatch"):
        evaluate(perceptron, (1, 0))


# ---- apply_delta ------------------------------------------------------------


@pytest.mark.parametrize(
    "x,flips,expected",
    [((0, 0, 0), {0}, (1, 0, 0)), ((1, 0, 1), set(), (1, 0, 1)), ((1, 0, 1), {0, 2}, (0, 0, 0))],
)
def test_apply_delta_examples(x, flips, expected):
    assert apply_delta(BinaryInstance(x), Delta(frozenset(flips))).bits == expected


def test_apply_delta_out_of_range():
    with pytest.raises(IndexError):
        apply_delta(BinaryInstance((0, 1)), Delta(frozenset({2})))


@given(st.lists(st.integers(0, 1), min_size=1, max_size=16), st.data())
def test_apply_delta_involution(bits, data):
    x = BinaryInstance(tuple(bits))
    flips = data.draw(st.frozensets(st.integers(0, len(bits) - 1)))
    d = Delta(flips)
    z = apply_delta(x, d)
    assert apply_delta(z, d) == x
    assert {i for i in range(x.dim) if z[i] != x[i]} == set(flips)


def test_binary_instance_rejects_non_binary():
    with pytest.raises(ValueError):
        BinaryInstance((0, 2))
    with pytest.raises(ValueError):
        BinaryInstance.from_string("01x")


# ---- validate ---------------------------------------------------------------


def test_read_once_violation_reported():
    f = Fbdd(2, 0, {0: (0, 1, 2), 2: (0, 1, 3)}, {1: 0, 3: 1})
    report = validate(f)
    assert any(r.startswith("read-once violated on path") for r in report)


def test_well_formed_perceptron_has_empty_report(perceptron):
    assert validate(perceptron) == []


def test_relu_dimension_error():
    net = ReluNetwork(2, (([[1, 1]] * 3, [0] * 3), ([[1, 1]] * 4, [0] * 4), ([[1] * 4], [0])))
    assert any("dimension error" in r for r in validate(net))


def test_cycle_and_dangling_reported():
    cyc = Fbdd(2, 0, {0: (0, 1, 2), 2: (1, 0, 1)}, {1: 0})
    assert any("cycle" in r for r in validate(cyc))
    dang = Fbdd(1, 0, {0: (0, 1, 7)}, {1: 0})
    assert any("7" in r for r in validate(dang))


def test_tree_with_shared_node_is_not_a_tree():
    t = DecisionTree(2, 0, {0: (0, 1, 2), 2: (1, 1, 3)}, {1: 0, 3: 1})
    assert any("not a tree" in r for r in validate(t))


def test_invalid_model_raises_on_check():
    with pytest.raises(InvalidModel):
        Fbdd(1, 0, {0: (3, 1, 1)}, {1: 0}).check_valid()


def test_decision_list_duplicate_literal():
    dl = DecisionList(2, ((((0, 1), (0, 0)), 1),), default=0)
    assert validate(dl)


# ---- batch/scalar agreement, bounds, determinism ------------------------------


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FAMILIES), st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_batch_matches_scalar(family, d, seed):
    m = random_model(np.random.default_rng(seed), family, d)
    pts = all_points(d)
    X = np.array([p.bits for p in pts], dtype=np.uint8)
    num, den = m.batch_scaled(X)
    for p, n in zip(pts, num):
        assert Fraction(int(n), den) == Fraction(m.evaluate(p))
        assert m.evaluate(p) == m.evaluate(p)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FAMILIES), st.integers(1, 6), st.integers(0, 2**32 - 1), st.data())
def test_bounds_are_sound(family, d, seed, data):
    m = random_model(np.random.default_rng(seed), family, d)
    lo = data.draw(st.lists(st.integers(0, 1), min_size=d, max_size=d))
    hi = [max(a, data.draw(st.integers(0, 1))) for a in lo]
    low, high = m.bounds(lo, hi)
    for p in all_points(d):
        if all(l <= b <= h for l, b, h in zip(lo, p.bits, hi)):
            assert low <= Fraction(m.evaluate(p)) <= high


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_fbdd_visits_each_variable_once(d, seed):
    f = random_model(np.random.default_rng(seed), "fbdd", d)
    for p in all_points(d):
        tested = [f.nodes[n][0] for n in f.trace(p)[:-1]]
        assert len(tested) == len(set(tested))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1), st.randoms())
def test_knn_permutation_invariance(d, seed, rnd):
    knn = random_model(np.random.default_rng(seed), "knn", d)
    # distinct vectors make the output independent of storage order
    pairs = list(dict(zip(knn.vectors, knn.labels)).items())
    base = KnnRegressor(tuple(v for v, _ in pairs), tuple(l for _, l in pairs), min(knn.k, len(pairs)))
    rnd.shuffle(pairs)
    shuffled = KnnRegressor(tuple(v for v, _ in pairs), tuple(l for _, l in pairs), base.k)
    for p in all_points(d):
        nearest = sorted(base.sq_distance(p.bits, i) for i in range(len(pairs)))
        if base.k < len(pairs) and nearest[base.k - 1] == nearest[base.k]:
            continue  # a tie at the k-th distance is broken by index
        assert evaluate(base, p) == evaluate(shuffled, p)


# ---- serialization ----------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FAMILIES), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_json_round_trip(family, d, seed):
    m = random_model(np.random.default_rng(seed), family, d)
    text = dumps_model(m)
    again = loads_model(text)
    assert dumps_model(again) == text
    assert json.loads(text)["kind"] in ("fbdd", "dt", "dl", "perceptron", "relu", "knn", "atm")
    for p in all_points(d):
        assert evaluate(again, p) == evaluate(m, p)


def test_ensemble_round_trip():
    e = random_relu_ensemble(np.random.default_rng(3), 3)
    assert model_to_dict(model_from_dict(model_to_dict(e))) == model_to_dict(e)


def test_rationals_serialize_as_strings():
    d = model_to_dict(Perceptron((Fraction(1, 2), 2), Fraction(-3, 4)))
    assert d["weights"] == ["1/2", 2] and d["bias"] == "-3/4"


@pytest.mark.parametrize(
    "bad",
    [
        "{",
        '{"kind": "nope", "dim": 1}',
        '{"kind": "perceptron", "dim": 2, "weights": [1], "bias": 0}',
        '{"kind": "perceptron", "dim": 1, "weights": ["x"], "bias": 0}',
    ],
)
def test_malformed_model_json(bad):
    with pytest.raises((ParseError, DimensionMismatch, InvalidModel)):
        m = loads_model(bad)
        m.check_valid()


# ---- flattening -------------------------------------------------------------


def _agree_everywhere(a, b, d):
    return all(Fraction(evaluate(a, p)) == Fraction(evaluate(b, p)) for p in all_points(d))


def test_singleton_ensemble_flattens_to_equivalent():
    net = random_relu(np.random.default_rng(1), 4)
    assert _agree_everywhere(flatten_ensemble(Ensemble((net,), "mean")), net, 4)


def test_two_copies_mean_d8():
    net = random_relu(np.random.default_rng(2), 8, widths=[3])
    flat = flatten_ensemble(Ensemble((net, net), "mean"))
    assert flat.widths()[0] == 6
    assert _agree_everywhere(flat, net, 8)


def test_mixed_depth_members_are_padded():
    rng = np.random.default_rng(5)
    shallow = random_relu(rng, 6, widths=[2])
    deep = random_relu(rng, 6, widths=[3, 2])
    e = Ensemble((shallow, deep), "mean")
    flat = flatten_ensemble(e)
    assert flat.depth == 3
    assert _agree_everywhere(flat, e, 6)
    assert _agree_everywhere(pad_network(shallow, 3), shallow, 6)


def test_flatten_rejects_other_families(perceptron):
    with pytest.raises(InvalidModel, match="heterogeneous"):
        flatten_ensemble(Ensemble((perceptron,), "majority"))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_flatten_equivalence_property(d, seed):
    e = random_relu_ensemble(np.random.default_rng(seed), d)
    flat = flatten_ensemble(e)
    assert flat.is_classifier == e.is_classifier
    assert _agree_everywhere(flat, e, d)
