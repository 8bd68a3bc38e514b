"""Exhaustive enumeration of ``{0,1}^d`` in vectorized chunks.

Points are identified with integer masks (bit ``i`` = feature ``i``).
Flip sets are masks too: the flip set of a point ``z`` relative to ``x`` is
``z ^ x``. Equal-objective candidates are ranked by :func:`flip_key`.
"""

import os

import numpy as np

from ..exceptions import CapExceeded

DEFAULT_MAX_DIM = 24
DEFAULT_MSR_MAX_DIM = 20
CHUNK_BITS = 16


def max_dim(explicit=None, default=DEFAULT_MAX_DIM):
    """Resolve the enumeration cap: explicit argument, else ``CFXLAB_MAX_DIM``,
    else ``default``."""
    if explicit is not None:
        return int(explicit)
    env = os.environ.get("CFXLAB_MAX_DIM")
    if env:
        return int(env)
    return default


def check_cap(what, dim, cap):
    if dim > cap:
        raise CapExceeded(what, dim, cap)


def popcount(a):
    a = np.asarray(a, dtype=np.int64)
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(a).astype(np.int64)
    out = np.zeros(a.shape, dtype=np.int64)
    a = a.copy()
    while np.any(a):
        out += a & 1
        a >>= 1
    return out


def bits_of(mask):
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def flip_key(mask):
    """Tie-break order among equal objectives: fewer flips, then the
    lexicographically smallest sorted index tuple."""
    b = bits_of(int(mask))
    return (len(b), b)


def masks_to_points(masks, dim):
    shifts = np.arange(dim, dtype=np.int64)
    return ((masks[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def iter_cube(dim, chunk_bits=CHUNK_BITS):
    """Yield ``(masks, X)`` chunks covering every point of ``{0,1}^dim``."""
    total = 1 << dim
    step = 1 << min(chunk_bits, dim)
    for start in range(0, total, step):
        masks = np.arange(start, start + step, dtype=np.int64)
        yield masks, masks_to_points(masks, dim)


def cube_table(model, cap_what="enumeration", cap=None):
    """All outputs of ``model`` over ``{0,1}^d`` as ``(numerators, den)``
    indexed by mask."""
    cap = max_dim(cap)
    check_cap(cap_what, model.dim, cap)
    parts, den = [], None
    for _, X in iter_cube(model.dim):
        vals, d = model._batch(X)
        if den is None:
            den = d
        elif d != den:
            raise AssertionError("inconsistent batch denominators")
        parts.append(vals)
    return np.concatenate(parts), den


class CubeSearch:
    """Running minimum over chunks with exact integer objectives.

    ``offer(masks, values, feasible)`` registers candidates; the best key is
    ``(value, flip_key(mask ^ x_mask))``.
    """

    def __init__(self, x_mask):
        self.x_mask = int(x_mask)
        self.best_value = None
        self.best_mask = None
        self.examined = 0

    def offer(self, masks, values, feasible=None):
        self.examined += len(masks)
        if feasible is not None:
            masks = masks[feasible]
            values = values[feasible]
        if len(masks) == 0:
            return
        m = values.min()
        if self.best_value is not None and m > self.best_value:
            return
        cands = masks[values == m]
        sizes = popcount(cands ^ self.x_mask)
        cands = cands[sizes == sizes.min()]
        best = min((int(c) for c in cands), key=lambda c: flip_key(c ^ self.x_mask))
        if self.best_value is None or m < self.best_value:
            self.best_value, self.best_mask = m, best
        elif flip_key(best ^ self.x_mask) < flip_key(self.best_mask ^ self.x_mask):
            self.best_mask = best

    @property
    def found(self):
        return self.best_mask is not None
