"""Additive tree models: the mean of several regression trees."""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .base import Model
from .diagrams import DecisionTree


@dataclass(frozen=True, eq=True)
class AdditiveTreeModel(Model):
    trees: tuple

    kind = "atm"

    def __post_init__(self):
        trees = tuple(self.trees)
        if any(not isinstance(t, DecisionTree) for t in trees):
            raise TypeError("additive tree models hold DecisionTree members")
        object.__setattr__(self, "trees", trees)

    @property
    def dim(self):
        return self.trees[0].dim if self.trees else 0

    @property
    def is_classifier(self):
        return False

    def problems(self):
        if not self.trees:
            return ["additive tree model has no trees"]
        out = []
        dims = {t.dim for t in self.trees}
        if len(dims) > 1:
            out.append(f"trees have differing input dimensions {sorted(dims)}")
        for i, tree in enumerate(self.trees):
            out.extend(f"tree {i}: {p}" for p in tree.problems())
        return out

    def _leaf_value(self, tree, bits):
        nid = tree.root
        while nid in tree.nodes:
            var, lo, hi = tree.nodes[nid]
            nid = hi if bits[var] else lo
        return tree.leaves[nid]

    def _evaluate(self, bits):
        total = sum((self._leaf_value(t, bits) for t in self.trees), Fraction(0))
        return total / len(self.trees)

    def _batch(self, X):
        parts = [t._batch(X) for t in self.trees]
        den = 1
        for _, d in parts:
            den = lcm(den, d)
        dtype = object if any(p.dtype == object for p, _ in parts) else np.int64
        total = np.zeros(X.shape[0], dtype=dtype)
        for vals, d in parts:
            total = total + vals.astype(dtype) * (den // d)
        return total, den * len(self.trees)

    def bounds(self, lo, hi):
        low = high = Fraction(0)
        for t in self.trees:
            vals = t.reachable_leaves(lo, hi)
            low += min(vals)
            high += max(vals)
        n = len(self.trees)
        return low / n, high / n

    def size(self):
        return sum(t.size() for t in self.trees)
