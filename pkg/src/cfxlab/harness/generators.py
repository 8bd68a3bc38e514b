"""Seeded random models for the experiments and test suites.

Weights and biases are integers drawn uniformly from ``[-8, 8]``. FBDDs are
grown bottom-up from the two leaves, so subgraphs are shared and different
paths may test variables in different orders.
"""

from fractions import Fraction

import numpy as np

from ..models.diagrams import DecisionList, DecisionTree, Fbdd
from ..models.ensemble import Ensemble
from ..models.knn import KnnRegressor
from ..models.linear import Perceptron, ReluNetwork
from ..models.trees import AdditiveTreeModel

WEIGHT_RANGE = 8


def as_rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _ints(rng, size):
    return [int(v) for v in rng.integers(-WEIGHT_RANGE, WEIGHT_RANGE + 1, size=size)]


def random_instance(rng, d):
    return tuple(int(b) for b in rng.integers(0, 2, size=d))


def random_perceptron(rng, d):
    return Perceptron(tuple(_ints(rng, d)), _ints(rng, 1)[0])


def random_fbdd(rng, d, n_nodes=None):
    """Read-once diagram with sharing; every node's variable is absent from
    the supports of both children."""
    rng = as_rng(rng)
    n_nodes = n_nodes or int(rng.integers(1, 3 * d + 1))
    leaves = {0: 0, 1: 1}
    nodes, support = {}, {0: frozenset(), 1: frozenset()}
    pool = [0, 1]
    for _ in range(n_nodes):
        lo, hi = (int(a) for a in rng.choice(pool, size=2, replace=False))
        free = [v for v in range(d) if v not in support[lo] and v not in support[hi]]
        if not free:
            continue
        var = free[int(rng.integers(len(free)))]
        nid = len(pool)
        nodes[nid] = (var, lo, hi)
        support[nid] = support[lo] | support[hi] | {var}
        pool.append(nid)
    root = pool[-1]
    # keep only what the root reaches
    keep, stack = set(), [root]
    while stack:
        n = stack.pop()
        if n in keep:
            continue
        keep.add(n)
        if n in nodes:
            stack.extend(nodes[n][1:])
    return Fbdd(
        d,
        root,
        {n: t for n, t in nodes.items() if n in keep},
        {n: v for n, v in leaves.items() if n in keep},
    )


def random_tree(rng, d, depth=3, values=(0, 1)):
    """Random decision tree; ``values`` are the allowed leaf values."""
    rng = as_rng(rng)
    nodes, leaves = {}, {}

    def grow(used, level):
        nid = len(nodes) + len(leaves)
        free = [v for v in range(d) if v not in used]
        if level == depth or not free or rng.random() < 0.2:
            leaves[nid] = values[int(rng.integers(len(values)))]
            return nid
        var = free[int(rng.integers(len(free)))]
        nodes[nid] = None  # reserve the id before growing children
        lo = grow(used | {var}, level + 1)
        hi = grow(used | {var}, level + 1)
        nodes[nid] = (var, lo, hi)
        return nid

    root = grow(frozenset(), 0)
    return DecisionTree(d, root, nodes, leaves)


def random_decision_list(rng, d, n_rules=None):
    rng = as_rng(rng)
    n_rules = n_rules or int(rng.integers(1, d + 2))
    rules = []
    for _ in range(n_rules):
        size = int(rng.integers(1, min(3, d) + 1))
        vars_ = rng.choice(d, size=size, replace=False)
        lits = tuple((int(v), int(rng.integers(0, 2))) for v in vars_)
        rules.append((lits, int(rng.integers(0, 2))))
    return DecisionList(d, tuple(rules), int(rng.integers(0, 2)))


def random_relu(rng, d, widths=None, classifier=False):
    rng = as_rng(rng)
    widths = list(widths) if widths is not None else [int(rng.integers(1, 5)) for _ in range(int(rng.integers(1, 3)))]
    layers, prev = [], d
    for w in widths + [1]:
        W = [_ints(rng, prev) for _ in range(w)]
        layers.append((W, _ints(rng, w)))
        prev = w
    return ReluNetwork(d, tuple(layers), classifier=classifier)


def random_knn(rng, d, n_vectors=None, k=None):
    rng = as_rng(rng)
    n = n_vectors or int(rng.integers(1, 9))
    k = k or int(rng.integers(1, n + 1))
    vectors = tuple(tuple(Fraction(int(b), 2) for b in rng.integers(0, 3, size=d)) for _ in range(n))
    labels = tuple(int(v) for v in rng.integers(0, WEIGHT_RANGE + 1, size=n))
    return KnnRegressor(vectors, labels, k)


def random_atm(rng, d, n_trees=None):
    rng = as_rng(rng)
    n = n_trees or int(rng.integers(1, 4))
    vals = tuple(range(0, WEIGHT_RANGE + 1))
    return AdditiveTreeModel(tuple(random_tree(rng, d, 3, vals) for _ in range(n)))


def random_relu_ensemble(rng, d, n_members=None, aggregation=None):
    rng = as_rng(rng)
    n = n_members or int(rng.integers(1, 5))
    agg = aggregation or ("majority", "mean")[int(rng.integers(2))]
    members = tuple(random_relu(rng, d, classifier=agg == "majority") for _ in range(n))
    return Ensemble(members, agg)


CLASSIFIER_FAMILIES = ("perceptron", "fbdd", "dt", "dl", "relu-classifier")
REGRESSOR_FAMILIES = ("relu", "knn", "atm")


def random_model(rng, family, d):
    rng = as_rng(rng)
    if family == "perceptron":
        return random_perceptron(rng, d)
    if family == "fbdd":
        return random_fbdd(rng, d)
    if family == "dt":
        return random_tree(rng, d, depth=min(d, 4))
    if family == "dl":
        return random_decision_list(rng, d)
    if family == "relu-classifier":
        return random_relu(rng, d, classifier=True)
    if family == "relu":
        return random_relu(rng, d)
    if family == "knn":
        return random_knn(rng, d)
    if family == "atm":
        return random_atm(rng, d)
    raise ValueError(f"unknown model family {family!r}")
