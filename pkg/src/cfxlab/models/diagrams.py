"""Free binary decision diagrams, decision trees and decision lists."""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .._rational import as_fraction, common_denominator, int_array
from .base import Model


@dataclass(frozen=True, eq=False)
class Fbdd(Model):
    """Rooted DAG classifier; low/high edges taken on feature value 0/1.

    ``nodes`` maps an internal node id to ``(var, low, high)`` and
    ``leaves`` maps a leaf id to its value. Leaves of a plain FBDD are class
    labels; :class:`DecisionTree` also allows rational regression leaves.
    """

    n_features: int
    root: int
    nodes: dict = field(default_factory=dict)
    leaves: dict = field(default_factory=dict)

    kind = "fbdd"

    def __post_init__(self):
        nodes = {int(k): tuple(int(t) for t in v) for k, v in dict(self.nodes).items()}
        leaves = {int(k): as_fraction(v) for k, v in dict(self.leaves).items()}
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "leaves", leaves)
        object.__setattr__(self, "_compiled", None)
        object.__setattr__(self, "_classifier", all(v in (0, 1) for v in leaves.values()))

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.n_features == other.n_features
            and self.root == other.root
            and self.nodes == other.nodes
            and self.leaves == other.leaves
        )

    __hash__ = None

    @classmethod
    def constant(cls, n_features, value):
        return cls(n_features, 0, {}, {0: value})

    @property
    def dim(self):
        return self.n_features

    @property
    def is_classifier(self):
        return self._classifier

    def problems(self):
        out = []
        if self.n_features < 1:
            out.append("dimension must be positive")
        both = set(self.nodes) & set(self.leaves)
        if both:
            out.append(f"ids used for both nodes and leaves: {sorted(both)}")
        known = set(self.nodes) | set(self.leaves)
        if self.root not in known:
            out.append(f"root {self.root} is not a node or leaf")
            return out
        for nid, (var, lo, hi) in sorted(self.nodes.items()):
            if not 0 <= var < self.n_features:
                out.append(f"node {nid} tests variable {var} outside 0..{self.n_features - 1}")
            for child in (lo, hi):
                if child not in known:
                    out.append(f"node {nid} has dangling child {child}")
        if self.kind == "fbdd":
            for lid, value in sorted(self.leaves.items()):
                if value not in (0, 1):
                    out.append(f"leaf {lid} has non-binary class label {value}")
        if out:
            return out
        cycle = self._find_cycle()
        if cycle is not None:
            out.append(f"cycle through node {cycle}")
            return out
        out.extend(self._read_once_problems())
        return out

    def _find_cycle(self):
        WHITE, GREY, BLACK = 0, 1, 2
        colour = {}
        for start in [self.root] + sorted(self.nodes):
            if colour.get(start, WHITE) != WHITE:
                continue
            stack = [(start, 0)]
            colour[start] = GREY
            while stack:
                nid, idx = stack.pop()
                children = self.nodes[nid][1:] if nid in self.nodes else ()
                if idx < len(children):
                    stack.append((nid, idx + 1))
                    child = children[idx]
                    state = colour.get(child, WHITE)
                    if state == GREY:
                        return child
                    if state == WHITE:
                        colour[child] = GREY
                        stack.append((child, 0))
                else:
                    colour[nid] = BLACK
        return None

    def supports(self):
        """Map node id -> frozenset of variables tested in its sub-DAG."""
        memo = {}
        for nid in self._topological():
            if nid in self.leaves:
                memo[nid] = frozenset()
            else:
                var, lo, hi = self.nodes[nid]
                memo[nid] = memo[lo] | memo[hi] | {var}
        return memo

    def _topological(self):
        """Reachable ids, children before parents."""
        order, seen = [], set()
        stack = [(self.root, False)]
        while stack:
            nid, expanded = stack.pop()
            if expanded:
                order.append(nid)
                continue
            if nid in seen:
                continue
            seen.add(nid)
            stack.append((nid, True))
            if nid in self.nodes:
                _, lo, hi = self.nodes[nid]
                for child in (hi, lo):
                    if child not in seen:
                        stack.append((child, False))
        return order

    def _read_once_problems(self):
        sup = self.supports()
        out = []
        for nid in sorted(sup):
            if nid in self.nodes:
                var, lo, hi = self.nodes[nid]
                if var in sup[lo] or var in sup[hi]:
                    out.append(
                        f"read-once violated on path: variable {var} tested at node {nid} "
                        f"and again below it"
                    )
        return out

    def trace(self, x):
        """Node ids visited when evaluating ``x`` (root first, leaf last)."""
        from .base import as_instance

        bits = as_instance(x).bits
        path, nid = [], self.root
        while nid in self.nodes:
            path.append(nid)
            var, lo, hi = self.nodes[nid]
            nid = hi if bits[var] else lo
        path.append(nid)
        return path

    def _evaluate(self, bits):
        nid = self.root
        while nid in self.nodes:
            var, lo, hi = self.nodes[nid]
            nid = hi if bits[var] else lo
        value = self.leaves[nid]
        return int(value) if self.is_classifier else value

    def _compile(self):
        if self._compiled is None:
            ids = sorted(set(self.nodes) | set(self.leaves))
            index = {nid: i for i, nid in enumerate(ids)}
            n = len(ids)
            var = np.zeros(n, dtype=np.int64)
            low = np.arange(n)
            high = np.arange(n)
            is_leaf = np.ones(n, dtype=bool)
            for nid, (v, lo, hi) in self.nodes.items():
                i = index[nid]
                var[i], low[i], high[i], is_leaf[i] = v, index[lo], index[hi], False
            nums, den = [0] * n, common_denominator(self.leaves.values())
            for nid, value in self.leaves.items():
                nums[index[nid]] = int(value * den)
            compiled = (index[self.root], var, low, high, is_leaf, int_array(nums), den)
            object.__setattr__(self, "_compiled", compiled)
        return self._compiled

    def _batch(self, X):
        root, var, low, high, is_leaf, values, den = self._compile()
        cur = np.full(X.shape[0], root, dtype=np.int64)
        rows = np.arange(X.shape[0])
        active = ~is_leaf[cur]
        while active.any():
            idx = rows[active]
            c = cur[idx]
            bit = X[idx, var[c]].astype(bool)
            cur[idx] = np.where(bit, high[c], low[c])
            active[idx] = ~is_leaf[cur[idx]]
        return values[cur], den

    def reachable_leaves(self, lo, hi):
        seen, stack, out = set(), [self.root], []
        while stack:
            nid = stack.pop()
            if nid in seen:
                continue
            seen.add(nid)
            if nid in self.leaves:
                out.append(self.leaves[nid])
                continue
            var, low, high = self.nodes[nid]
            if lo[var] == 0:
                stack.append(low)
            if hi[var] == 1:
                stack.append(high)
        return out

    def bounds(self, lo, hi):
        vals = self.reachable_leaves(lo, hi)
        return min(vals), max(vals)

    def size(self):
        return len(self.nodes) + len(self.leaves)


@dataclass(frozen=True, eq=False)
class DecisionTree(Fbdd):
    """An FBDD whose graph is a tree; leaves may carry rational values."""

    kind = "dt"

    def problems(self):
        out = super().problems()
        if out:
            return out
        parents = {}
        for nid, (_, lo, hi) in self.nodes.items():
            for child in (lo, hi):
                parents[child] = parents.get(child, 0) + 1
        if parents.get(self.root, 0):
            out.append(f"root {self.root} has a parent")
        for nid in sorted(set(self.nodes) | set(self.leaves)):
            if nid != self.root and parents.get(nid, 0) > 1:
                out.append(f"node {nid} has {parents[nid]} parents (not a tree)")
        return out


@dataclass(frozen=True, eq=False)
class DecisionList(Model):
    """Ordered IF-THEN rules; the first rule whose conjunction holds fires.

    ``rules`` is a sequence of ``(literals, label)`` where ``literals`` is a
    sequence of ``(var, value)`` pairs.
    """

    n_features: int
    rules: tuple = ()
    default: int = 0

    kind = "dl"

    def __post_init__(self):
        rules = tuple(
            (tuple((int(v), int(b)) for v, b in lits), int(label)) for lits, label in self.rules
        )
        object.__setattr__(self, "rules", rules)
        object.__setattr__(self, "default", int(self.default))

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and (self.n_features, self.rules, self.default)
            == (other.n_features, other.rules, other.default)
        )

    __hash__ = None

    @property
    def dim(self):
        return self.n_features

    @property
    def is_classifier(self):
        return True

    def problems(self):
        out = []
        for r, (lits, label) in enumerate(self.rules):
            seen = set()
            for var, val in lits:
                if not 0 <= var < self.n_features:
                    out.append(f"rule {r} references variable {var} outside 0..{self.n_features - 1}")
                if val not in (0, 1):
                    out.append(f"rule {r} literal on variable {var} has non-binary value {val}")
                if var in seen:
                    out.append(f"rule {r} has more than one literal on variable {var}")
                seen.add(var)
            if label not in (0, 1):
                out.append(f"rule {r} has non-binary label {label}")
        if self.default not in (0, 1):
            out.append(f"default label {self.default} is not binary")
        return out

    def _evaluate(self, bits):
        for lits, label in self.rules:
            if all(bits[v] == b for v, b in lits):
                return label
        return self.default

    def _batch(self, X):
        out = np.full(X.shape[0], self.default, dtype=np.int64)
        undecided = np.ones(X.shape[0], dtype=bool)
        for lits, label in self.rules:
            fires = undecided.copy()
            for v, b in lits:
                fires &= X[:, v] == b
            out[fires] = label
            undecided &= ~fires
        return out, 1

    def bounds(self, lo, hi):
        labels = set()
        for lits, label in self.rules:
            status = True
            for v, b in lits:
                if lo[v] == hi[v]:
                    if lo[v] != b:
                        status = False
                        break
                else:
                    status = None
            if status is False:
                continue
            labels.add(label)
            if status is True:
                break
        else:
            labels.add(self.default)
        return Fraction(min(labels)), Fraction(max(labels))
