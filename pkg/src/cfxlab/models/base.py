"""Binary instances, flip sets and the common model interface."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..exceptions import DimensionMismatch, InvalidModel
from ..validation import check_binary_array, check_dim


@dataclass(frozen=True)
class BinaryInstance:
    """A point of ``{0,1}^d``."""

    bits: tuple

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("instance bits must be 0 or 1")
        if not bits:
            raise ValueError("instance must have at least one feature")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, text):
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def zeros(cls, dim):
        return cls((0,) * dim)

    @classmethod
    def from_mask(cls, mask, dim):
        return cls(tuple((mask >> i) & 1 for i in range(dim)))

    @property
    def dim(self):
        return len(self.bits)

    def to_mask(self):
        """Integer whose bit ``i`` is feature ``i``."""
        return sum(b << i for i, b in enumerate(self.bits))

    def to_array(self):
        return np.array(self.bits, dtype=np.uint8)

    def __str__(self):
        return "".join(map(str, self.bits))

    def __len__(self):
        return len(self.bits)

    def __getitem__(self, i):
        return self.bits[i]


@dataclass(frozen=True)
class Delta:
    """Set of feature indices to toggle (xor semantics on binary inputs)."""

    flips: frozenset = frozenset()

    def __post_init__(self):
        flips = list(self.flips)
        if any(int(i) != i or i < 0 for i in flips):
            raise ValueError("flip indices must be non-negative integers")
        if len(set(flips)) != len(flips):
            raise ValueError("duplicate flip index")
        object.__setattr__(self, "flips", frozenset(int(i) for i in flips))

    @classmethod
    def from_mask(cls, mask):
        flips, i = [], 0
        while mask:
            if mask & 1:
                flips.append(i)
            mask >>= 1
            i += 1
        return cls(frozenset(flips))

    def sorted(self):
        return tuple(sorted(self.flips))

    def to_mask(self):
        return sum(1 << i for i in self.flips)

    def __len__(self):
        return len(self.flips)

    def __iter__(self):
        return iter(self.sorted())


def as_instance(x):
    if isinstance(x, BinaryInstance):
        return x
    if isinstance(x, str):
        return BinaryInstance.from_string(x)
    return BinaryInstance(tuple(np.asarray(x).ravel().tolist()))


def as_delta(delta):
    if isinstance(delta, Delta):
        return delta
    return Delta(frozenset(delta))


def apply_delta(x, delta):
    """Return ``x`` with every index in ``delta`` flipped."""
    x = as_instance(x)
    delta = as_delta(delta)
    bad = [i for i in delta.flips if i >= x.dim]
    if bad:
        raise IndexError(f"flip index {min(bad)} out of range for dimension {x.dim}")
    bits = list(x.bits)
    for i in delta.flips:
        bits[i] ^= 1
    return BinaryInstance(tuple(bits))


class Model:
    """Interface shared by every classifier and regressor family.

    Subclasses provide exact scalar evaluation (``_evaluate``), vectorized
    exact evaluation on integer-scaled arrays (``_batch``), sound output
    intervals over partially assigned inputs (``bounds``) and a structural
    self-check (``problems``).
    """

    kind = "model"

    @property
    def dim(self):
        raise NotImplementedError

    @property
    def n_features_in_(self):
        return self.dim

    @property
    def is_classifier(self):
        raise NotImplementedError

    def problems(self):
        return []

    def check_valid(self):
        problems = self.problems()
        if problems:
            raise InvalidModel(problems)
        return self

    def evaluate(self, x):
        """Exact output on one binary instance: a label or a Fraction."""
        x = as_instance(x)
        check_dim(x.dim, self.dim)
        return self._evaluate(x.bits)

    def _evaluate(self, bits):
        raise NotImplementedError

    def batch_scaled(self, X):
        """Exact outputs on the rows of ``X`` as ``(numerators, denominator)``."""
        X = np.asarray(X, dtype=np.uint8)
        if X.ndim != 2 or X.shape[1] != self.dim:
            raise DimensionMismatch(
                f"dimension mismatch: expected {self.dim} features, got {X.shape[-1]}"
            )
        return self._batch(X)

    def _batch(self, X):
        # generic fallback: scalar evaluation row by row
        vals = [self._evaluate(tuple(int(b) for b in row)) for row in X]
        from .._rational import common_denominator

        den = common_denominator(vals)
        return np.array([int(v * den) for v in vals], dtype=object), den

    def predict(self, X):
        """Evaluate every row of a binary matrix.

        Classifiers return an integer label array, regressors an object
        array of :class:`~fractions.Fraction`.
        """
        X = check_binary_array(X, self.dim, ensure_2d=False)
        num, den = self._batch(X)
        if self.is_classifier:
            return np.asarray(num // den, dtype=np.int64)
        return np.array([Fraction(int(n), den) for n in num], dtype=object)

    def bounds(self, lo, hi):
        """Sound interval ``(low, high)`` containing every output reachable
        from inputs ``z`` with ``lo <= z <= hi`` elementwise."""
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError
