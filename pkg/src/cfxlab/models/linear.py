"""Perceptrons and ReLU networks with exact rational weights."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .._rational import INT64_SAFE, as_fraction, common_denominator
from .base import Model


@dataclass(frozen=True, eq=True)
class Perceptron(Model):
    """Linear threshold classifier: class 1 iff ``w . x + b > 0``."""

    weights: tuple
    bias: Fraction = Fraction(0)

    kind = "perceptron"

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(as_fraction(w) for w in self.weights))
        object.__setattr__(self, "bias", as_fraction(self.bias))

    @property
    def dim(self):
        return len(self.weights)

    @property
    def is_classifier(self):
        return True

    def problems(self):
        return [] if self.weights else ["perceptron has no weights"]

    def score(self, bits):
        return sum((w for w, b in zip(self.weights, bits) if b), self.bias)

    def _evaluate(self, bits):
        return 1 if self.score(bits) > 0 else 0

    def _scaled(self):
        den = common_denominator(self.weights + (self.bias,))
        w = [int(v * den) for v in self.weights]
        b = int(self.bias * den)
        bound = sum(abs(v) for v in w) + abs(b)
        dtype = np.int64 if bound < INT64_SAFE else object
        return np.array(w, dtype=dtype), b

    def _batch(self, X):
        w, b = self._scaled()
        s = X.astype(w.dtype) @ w + b
        return (s > 0).astype(np.int64), 1

    def score_bounds(self, lo, hi):
        s_lo = s_hi = self.bias
        for w, l, h in zip(self.weights, lo, hi):
            if l == h:
                if l:
                    s_lo += w
                    s_hi += w
            elif w > 0:
                s_hi += w
            else:
                s_lo += w
        return s_lo, s_hi

    def bounds(self, lo, hi):
        s_lo, s_hi = self.score_bounds(lo, hi)
        return Fraction(int(s_lo > 0)), Fraction(int(s_hi > 0))


def _as_matrix(rows):
    return tuple(tuple(as_fraction(v) for v in row) for row in rows)


@dataclass(frozen=True, eq=False)
class ReluNetwork(Model):
    """Feed-forward network: ReLU on hidden layers, identity on the output.

    ``layers`` is a sequence of ``(weights, bias)`` with ``weights`` given
    row-major (one row per neuron). With ``classifier=True`` the single
    output is thresholded (class 1 iff output > 0).
    """

    n_features: int
    layers: tuple
    classifier: bool = False

    kind = "relu"

    def __post_init__(self):
        layers = tuple(
            (_as_matrix(W), tuple(as_fraction(v) for v in b)) for W, b in self.layers
        )
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "classifier", bool(self.classifier))
        object.__setattr__(self, "_int_layers", None)

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and (self.n_features, self.layers, self.classifier)
            == (other.n_features, other.layers, other.classifier)
        )

    __hash__ = None

    @property
    def dim(self):
        return self.n_features

    @property
    def depth(self):
        return len(self.layers)

    @property
    def is_classifier(self):
        return self.classifier

    def widths(self):
        return [len(W) for W, _ in self.layers]

    def problems(self):
        out = []
        if not self.layers:
            return ["network has no layers"]
        expected = self.n_features
        for i, (W, b) in enumerate(self.layers):
            if not W:
                out.append(f"layer {i} has no neurons")
                continue
            cols = {len(row) for row in W}
            if len(cols) > 1:
                out.append(f"layer {i} has ragged weight rows {sorted(cols)}")
            ncols = max(cols)
            if ncols != expected:
                src = "the input" if i == 0 else f"layer {i - 1}"
                out.append(
                    f"dimension error: layer {i} expects {ncols} inputs but {src} "
                    f"produces {expected}"
                )
            if len(b) != len(W):
                out.append(f"layer {i} has {len(W)} neurons but {len(b)} biases")
            expected = len(W)
        if expected != 1:
            out.append(f"output layer has width {expected}, expected 1")
        return out

    def raw_output(self, bits):
        a = [Fraction(int(v)) for v in bits]
        last = len(self.layers) - 1
        for i, (W, b) in enumerate(self.layers):
            z = [sum((w * v for w, v in zip(row, a) if v), bi) for row, bi in zip(W, b)]
            a = z if i == last else [v if v > 0 else Fraction(0) for v in z]
        return a[0]

    def _evaluate(self, bits):
        out = self.raw_output(bits)
        if self.classifier:
            return 1 if out > 0 else 0
        return out

    def int_layers(self):
        """Integer-scaled layers: ``(W_int, b_int, dtype)`` with a global
        output denominator, so ``output = final / den`` exactly."""
        if self._int_layers is None:
            den = 1
            bound = 1  # bound on |activation numerators|
            layers = []
            for W, b in self.layers:
                d_l = common_denominator([v for row in W for v in row] + list(b))
                Wi = [[int(v * d_l) for v in row] for row in W]
                bi = [int(v * d_l * den) for v in b]
                row_bound = max(
                    sum(abs(v) for v in row) * bound + abs(c) for row, c in zip(Wi, bi)
                )
                bound = row_bound
                den *= d_l
                layers.append((Wi, bi))
            dtype = np.int64 if bound < INT64_SAFE else object
            packed = [
                (np.array(Wi, dtype=dtype), np.array(bi, dtype=dtype)) for Wi, bi in layers
            ]
            object.__setattr__(self, "_int_layers", (packed, den, dtype))
        return self._int_layers

    def raw_batch(self, X):
        layers, den, dtype = self.int_layers()
        a = X.astype(dtype)
        last = len(layers) - 1
        for i, (W, b) in enumerate(layers):
            z = a @ W.T + b
            a = z if i == last else np.maximum(z, 0)
        return a[:, 0], den

    def _batch(self, X):
        out, den = self.raw_batch(X)
        if self.classifier:
            return (out > 0).astype(np.int64), 1
        return out, den

    def raw_bounds(self, lo, hi):
        """Interval bound propagation; returns exact Fractions."""
        layers, den, dtype = self.int_layers()
        a_lo = np.asarray(lo).astype(dtype)
        a_hi = np.asarray(hi).astype(dtype)
        last = len(layers) - 1
        for i, (W, b) in enumerate(layers):
            Wp = np.maximum(W, 0)
            Wn = np.minimum(W, 0)
            z_lo = Wp @ a_lo + Wn @ a_hi + b
            z_hi = Wp @ a_hi + Wn @ a_lo + b
            if i == last:
                a_lo, a_hi = z_lo, z_hi
            else:
                a_lo, a_hi = np.maximum(z_lo, 0), np.maximum(z_hi, 0)
        return Fraction(int(a_lo[0]), den), Fraction(int(a_hi[0]), den)

    def bounds(self, lo, hi):
        l, h = self.raw_bounds(lo, hi)
        if self.classifier:
            return Fraction(int(l > 0)), Fraction(int(h > 0))
        return l, h

    def size(self):
        return self.n_features + sum(self.widths())
