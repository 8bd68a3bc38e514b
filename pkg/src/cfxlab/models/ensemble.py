"""Homogeneous ensembles and their flattening into a single ReLU network."""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from ..exceptions import CapExceeded, InvalidModel
from .base import Model
from .linear import ReluNetwork

AGGREGATIONS = ("majority", "mean")


@dataclass(frozen=True, eq=True)
class Ensemble(Model):
    """Majority vote over classifiers (ties -> class 0) or mean of outputs."""

    members: tuple
    aggregation: str = "majority"

    kind = "ensemble"

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))

    @property
    def dim(self):
        return self.members[0].dim if self.members else 0

    @property
    def is_classifier(self):
        return self.aggregation == "majority"

    def problems(self):
        if not self.members:
            return ["ensemble has no members"]
        out = []
        if self.aggregation not in AGGREGATIONS:
            out.append(f"unknown aggregation {self.aggregation!r}")
        kinds = {m.kind for m in self.members}
        if len(kinds) > 1:
            out.append(f"heterogeneous member family {sorted(kinds)}")
        dims = {m.dim for m in self.members}
        if len(dims) > 1:
            out.append(f"members have differing input dimensions {sorted(dims)}")
        if self.aggregation == "majority" and not all(m.is_classifier for m in self.members):
            out.append("majority vote needs classifier members")
        for i, m in enumerate(self.members):
            out.extend(f"member {i}: {p}" for p in m.problems())
        return out

    def _combine(self, outputs):
        n = len(self.members)
        if self.aggregation == "majority":
            return 1 if 2 * sum(1 for o in outputs if o == 1) > n else 0
        return sum((Fraction(o) for o in outputs), Fraction(0)) / n

    def _evaluate(self, bits):
        return self._combine([m._evaluate(bits) for m in self.members])

    def _batch(self, X):
        n = len(self.members)
        parts = [m._batch(X) for m in self.members]
        if self.aggregation == "majority":
            votes = sum((vals // d == 1).astype(np.int64) for vals, d in parts)
            return (2 * votes > n).astype(np.int64), 1
        den = 1
        for _, d in parts:
            den = lcm(den, d)
        dtype = object if any(v.dtype == object for v, _ in parts) else np.int64
        total = np.zeros(X.shape[0], dtype=dtype)
        for vals, d in parts:
            total = total + vals.astype(dtype) * (den // d)
        return total, den * n

    def bounds(self, lo, hi):
        bs = [m.bounds(lo, hi) for m in self.members]
        n = len(self.members)
        if self.aggregation == "majority":
            sure = sum(1 for l, _ in bs if l == 1)
            possible = sum(1 for _, h in bs if h == 1)
            return Fraction(int(2 * sure > n)), Fraction(int(2 * possible > n))
        return sum(l for l, _ in bs) / n, sum(h for _, h in bs) / n

    def size(self):
        return sum(m.size() for m in self.members)


def _identity(width):
    return tuple(tuple(Fraction(int(i == j)) for j in range(width)) for i in range(width))


def pad_network(net, depth):
    """Deepen ``net`` to ``depth`` layers with identity ReLU layers placed
    right before the output layer; exact because the activations feeding
    the output (hidden ReLU outputs or binary inputs) are non-negative."""
    extra = depth - net.depth
    if extra < 0:
        raise ValueError("cannot pad to a smaller depth")
    if extra == 0:
        return net
    width = net.n_features if net.depth == 1 else len(net.layers[-2][0])
    ident = (_identity(width), (Fraction(0),) * width)
    layers = net.layers[:-1] + (ident,) * extra + net.layers[-1:]
    return ReluNetwork(net.n_features, layers, net.classifier)


def _block_stack(blocks):
    """Block-diagonal stacking of ``(W, b)`` pairs."""
    total_cols = sum(len(W[0]) for W, _ in blocks)
    rows, bias, offset = [], [], 0
    for W, b in blocks:
        cols = len(W[0])
        for row, c in zip(W, b):
            rows.append((Fraction(0),) * offset + tuple(row) + (Fraction(0),) * (total_cols - offset - cols))
            bias.append(c)
        offset += cols
    return tuple(rows), tuple(bias)


def _min_positive_score(net, max_dim):
    from ..explain.enumerate import iter_cube

    if net.n_features > max_dim:
        raise CapExceeded("majority flattening margin search", net.n_features, max_dim)
    best = None
    for _, X in iter_cube(net.n_features):
        out, den = net.raw_batch(X)
        pos = out[out > 0]
        if len(pos):
            m = Fraction(int(pos.min()), den)
            best = m if best is None else min(best, m)
    return best if best is not None else Fraction(1)


def flatten_ensemble(ensemble, max_dim=24):
    """Rewrite an ensemble of ReLU networks as one equivalent ReLU network.

    Mean aggregation stacks the members side by side (shared inputs,
    block-diagonal hidden layers) and averages the output rows. Majority
    vote additionally turns each member's score ``s`` into an exact step
    ``relu(s/eps) - relu(s/eps - 1)`` where ``eps`` is the member's smallest
    positive score on ``{0,1}^d``; finding ``eps`` is an enumeration capped
    at ``max_dim`` features.
    """
    members = ensemble.members
    if not members or any(not isinstance(m, ReluNetwork) for m in members):
        raise InvalidModel("heterogeneous member family: flattening needs ReLU network members")
    problems = ensemble.problems()
    if problems:
        raise InvalidModel(problems)
    n = len(members)
    d = members[0].n_features
    depth = max(m.depth for m in members)
    nets = [pad_network(m, depth) for m in members]

    hidden = []
    if depth > 1:
        first_rows, first_bias = [], []
        for net in nets:
            W, b = net.layers[0]
            first_rows.extend(W)
            first_bias.extend(b)
        hidden.append((tuple(first_rows), tuple(first_bias)))
        for li in range(1, depth - 1):
            hidden.append(_block_stack([net.layers[li] for net in nets]))

    # output rows of every member, expressed over the stacked final activations
    if depth > 1:
        outs = _block_stack([net.layers[-1] for net in nets])
    else:
        outs = (tuple(net.layers[0][0][0] for net in nets), tuple(net.layers[0][1][0] for net in nets))

    if ensemble.aggregation == "mean":
        W_out, b_out = outs
        row = tuple(sum(col) / n for col in zip(*W_out))
        layer = ((row,), (sum(b_out) / n,))
        return ReluNetwork(d, tuple(hidden) + (layer,), classifier=False)

    eps = [_min_positive_score(m, max_dim) for m in members]
    W_out, b_out = outs
    step_rows, step_bias = [], []
    for row, c, e in zip(W_out, b_out, eps):
        scaled = tuple(w / e for w in row)
        step_rows += [scaled, scaled]
        step_bias += [c / e, c / e - 1]
    final_row = tuple(Fraction(1 if i % 2 == 0 else -1) for i in range(2 * n))
    final_bias = -(Fraction(n // 2) + Fraction(1, 2))
    layers = tuple(hidden) + ((tuple(step_rows), tuple(step_bias)), ((final_row,), (final_bias,)))
    return ReluNetwork(d, layers, classifier=True)
