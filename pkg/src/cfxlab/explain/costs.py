"""Change-cost functions over flip sets."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .._rational import INT64_SAFE, as_fraction, common_denominator, format_fraction
from ..exceptions import InvalidSpec


@dataclass(frozen=True)
class CostFunction:
    """Hamming (``l0``) or weighted-``l1`` cost of a flip set.

    On binary inputs the ``l1`` norm of the change vector equals the
    Hamming distance, so the weighted form simply charges ``weights[i]``
    for flipping feature ``i``.
    """

    kind: str = "hamming"
    weights: tuple = None

    def __post_init__(self):
        if self.kind not in ("hamming", "weighted-l1"):
            raise InvalidSpec(f"unknown cost kind {self.kind!r}")
        if self.kind == "weighted-l1":
            if self.weights is None:
                raise InvalidSpec("weighted-l1 cost needs weights")
            w = tuple(as_fraction(v) for v in self.weights)
            if any(v < 0 for v in w):
                raise InvalidSpec("cost weights must be non-negative")
            object.__setattr__(self, "weights", w)
        elif self.weights is not None:
            raise InvalidSpec("hamming cost takes no weights")

    def check_dim(self, dim):
        if self.kind == "weighted-l1" and len(self.weights) != dim:
            raise InvalidSpec(f"cost has {len(self.weights)} weights for {dim} features")

    def weight_vector(self, dim):
        if self.kind == "hamming":
            return [Fraction(1)] * dim
        self.check_dim(dim)
        return list(self.weights)

    def __call__(self, delta, dim=None):
        flips = delta.flips if hasattr(delta, "flips") else set(delta)
        if self.kind == "hamming":
            return Fraction(len(flips))
        return sum((self.weights[i] for i in flips), Fraction(0))

    def max_value(self, dim):
        """Supremum of the cost over all flip sets on ``dim`` features."""
        return sum(self.weight_vector(dim), Fraction(0))

    def scaled(self, dim):
        """``(int weight array, den)`` with cost = ``flips @ weights / den``."""
        w = self.weight_vector(dim)
        den = common_denominator(w)
        ints = [int(v * den) for v in w]
        dtype = np.int64 if sum(ints) < INT64_SAFE else object
        return np.array(ints, dtype=dtype), den

    def to_dict(self):
        if self.kind == "hamming":
            return {"kind": "hamming"}
        return {"kind": "weighted-l1", "weights": [format_fraction(v) for v in self.weights]}

    @classmethod
    def from_dict(cls, data):
        if data is None:
            return cls()
        if isinstance(data, str):
            return cls(data)
        kind = data.get("kind", "hamming")
        if kind in ("l0", "hamming"):
            return cls("hamming")
        if kind in ("l1", "weighted-l1"):
            return cls("weighted-l1", tuple(data.get("weights", ())))
        raise InvalidSpec(f"unknown cost kind {kind!r}")


HAMMING = CostFunction()
