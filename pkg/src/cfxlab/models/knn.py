"""k-nearest-neighbour regressor with exact squared Euclidean distances."""

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .._rational import INT64_SAFE, as_fraction, common_denominator
from .base import Model


@dataclass(frozen=True, eq=False)
class KnnRegressor(Model):
    """Mean label of the ``k`` stored vectors nearest to the query.

    Ties at the k-th distance keep the lowest-indexed vectors, i.e. the
    neighbours are the first ``k`` vectors in ``(distance, index)`` order.
    """

    vectors: tuple
    labels: tuple
    k: int = 1

    kind = "knn"

    def __post_init__(self):
        vecs = tuple(tuple(as_fraction(v) for v in vec) for vec in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "labels", tuple(as_fraction(v) for v in self.labels))
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "_packed", None)

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and (self.vectors, self.labels, self.k) == (other.vectors, other.labels, other.k)
        )

    __hash__ = None

    @property
    def dim(self):
        return len(self.vectors[0]) if self.vectors else 0

    @property
    def is_classifier(self):
        return False

    def problems(self):
        out = []
        if not self.vectors:
            return ["kNN model stores no vectors"]
        dims = {len(v) for v in self.vectors}
        if len(dims) > 1:
            out.append(f"stored vectors have differing dimensions {sorted(dims)}")
        if len(self.labels) != len(self.vectors):
            out.append(f"{len(self.vectors)} vectors but {len(self.labels)} labels")
        if not 1 <= self.k <= len(self.vectors):
            out.append(f"k={self.k} outside 1..{len(self.vectors)}")
        return out

    def sq_distance(self, bits, i):
        return sum((Fraction(b) - v) ** 2 for b, v in zip(bits, self.vectors[i]))

    def neighbours(self, bits):
        order = sorted(range(len(self.vectors)), key=lambda i: (self.sq_distance(bits, i), i))
        return order[: self.k]

    def _evaluate(self, bits):
        return sum((self.labels[i] for i in self.neighbours(bits)), Fraction(0)) / self.k

    def _pack(self):
        if self._packed is None:
            den = common_denominator([v for vec in self.vectors for v in vec])
            V = [[int(v * den) for v in vec] for vec in self.vectors]
            lden = common_denominator(self.labels)
            L = [int(v * lden) for v in self.labels]
            mag = max(max((abs(v) for row in V for v in row), default=0), den)
            dist_bound = 4 * self.dim * mag * mag * (len(V) + 1)
            dtype = np.int64 if dist_bound < INT64_SAFE else object
            self_sq = [sum(v * v for v in row) for row in V]
            packed = (
                np.array(V, dtype=dtype),
                np.array(self_sq, dtype=dtype),
                den,
                np.array(L, dtype=np.int64 if max(map(abs, L), default=0) * self.k < INT64_SAFE else object),
                lden,
                dtype,
            )
            object.__setattr__(self, "_packed", packed)
        return self._packed

    def scaled_sq_distances(self, X):
        """``den**2 * distance**2`` for every (row, vector) pair as integers."""
        V, self_sq, den, _, _, dtype = self._pack()
        Xs = X.astype(dtype) * den
        x_sq = (Xs * Xs).sum(axis=1)
        return x_sq[:, None] - 2 * (Xs @ V.T) + self_sq[None, :]

    def _batch(self, X, chunk=4096):
        _, _, _, L, lden, _ = self._pack()
        n_vec = len(self.vectors)
        out = np.empty(X.shape[0], dtype=L.dtype)
        idx = np.arange(n_vec)
        for start in range(0, X.shape[0], chunk):
            D = self.scaled_sq_distances(X[start : start + chunk])
            keys = D * n_vec + idx[None, :]
            if keys.dtype == object or self.k == n_vec:
                nearest = np.argsort(keys, axis=1, kind="stable")[:, : self.k]
            else:
                nearest = np.argpartition(keys, self.k - 1, axis=1)[:, : self.k]
            out[start : start + chunk] = L[nearest].sum(axis=1)
        return out, lden * self.k

    def distance_bounds(self, lo, hi):
        lows, highs = [], []
        for vec in self.vectors:
            d_lo = d_hi = Fraction(0)
            for v, l, h in zip(vec, lo, hi):
                a, b = (Fraction(int(l)) - v) ** 2, (Fraction(int(h)) - v) ** 2
                d_lo += min(a, b)
                d_hi += max(a, b)
            lows.append(d_lo)
            highs.append(d_hi)
        return lows, highs

    def bounds(self, lo, hi):
        d_lo, d_hi = self.distance_bounds(lo, hi)
        n = len(self.vectors)
        # neighbour order is by the key (distance, index)
        lo_keys = sorted((d, j) for j, d in enumerate(d_lo))
        hi_keys = sorted((d, j) for j, d in enumerate(d_hi))
        sure_in, candidates = [], []
        for i in range(n):
            could_precede = bisect_left(lo_keys, (d_hi[i], i)) - (d_lo[i] < d_hi[i])
            if could_precede < self.k:
                sure_in.append(i)
            elif bisect_left(hi_keys, (d_lo[i], i)) < self.k:
                candidates.append(i)
        base = sum((self.labels[i] for i in sure_in), Fraction(0))
        rest = self.k - len(sure_in)
        cand = sorted(self.labels[i] for i in candidates)
        low = base + sum(cand[:rest], Fraction(0))
        high = base + sum(cand[len(cand) - rest :], Fraction(0)) if rest else base
        return low / self.k, high / self.k

    def size(self):
        return len(self.vectors)
