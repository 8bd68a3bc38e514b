"""Input validation helpers in the spirit of ``sklearn.utils.validation``."""

import numpy as np
from sklearn.utils import check_array

from .exceptions import DimensionMismatch


def check_binary_array(X, n_features=None, *, ensure_2d=True):
    """Validate ``X`` as a 0/1 matrix and return it as ``uint8``.

    Parameters
    ----------
    X : array-like of shape (n_samples, n_features)
        Candidate binary inputs. Booleans and integer-valued floats are
        accepted as long as every entry is exactly 0 or 1.
    n_features : int, optional
        Required number of columns.
    ensure_2d : bool, default=True
        If False a single 1-D row is accepted and reshaped to ``(1, d)``.

    Returns
    -------
    X : ndarray of uint8, shape (n_samples, n_features)
    """
    if not ensure_2d:
        arr = np.asarray(X)
        if arr.ndim == 1:
            X = arr.reshape(1, -1)
    X = check_array(X, dtype=None, ensure_2d=True, ensure_min_samples=1)
    if X.dtype == object:
        X = X.astype(float)
    if not np.all((X == 0) | (X == 1)):
        raise ValueError("inputs must be binary (every entry 0 or 1)")
    X = X.astype(np.uint8)
    if n_features is not None and X.shape[1] != n_features:
        raise DimensionMismatch(
            f"dimension mismatch: expected {n_features} features, got {X.shape[1]}"
        )
    return X


def check_dim(actual, expected, what="instance"):
    if actual != expected:
        raise DimensionMismatch(
            f"dimension mismatch: {what} has dimension {actual}, expected {expected}"
        )
