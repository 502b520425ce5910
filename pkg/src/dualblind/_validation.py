"""Input validation helpers shared by the public functions and estimators.

Complex inputs are not accepted by :func:`sklearn.utils.check_array`, so the
checks here are written directly against numpy.
"""

import numbers

import numpy as np

from .exceptions import DomainError, ShapeError


def check_delays(delays, name="delays"):
    """Return `delays` as a 1-D float array with every entry in [0, 1)."""
    arr = np.asarray(delays, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    if np.any(arr < 0.0) or np.any(arr >= 1.0):
        raise DomainError(f"{name} must lie in [0, 1), got {arr.tolist()}")
    return arr


def check_complex_vector(x, name="x", length=None):
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise ShapeError(f"{name} must be one-dimensional, got shape {arr.shape}")
    arr = arr.astype(complex, copy=False)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite entries")
    if length is not None and arr.shape[0] != length:
        raise ShapeError(f"{name} must have length {length}, got {arr.shape[0]}")
    return arr


def check_complex_matrix(m, name="m", shape=None):
    arr = np.asarray(m)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be two-dimensional, got shape {arr.shape}")
    arr = arr.astype(complex, copy=False)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite entries")
    if shape is not None:
        for axis, (got, want) in enumerate(zip(arr.shape, shape)):
            if want is not None and got != want:
                raise ShapeError(
                    f"{name} has shape {arr.shape}, expected {tuple(shape)} "
                    f"(mismatch on axis {axis})"
                )
    return arr


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_positive_real(value, name, allow_inf=False):
    value = float(value)
    if np.isnan(value) or value <= 0.0 or (np.isinf(value) and not allow_inf):
        raise DomainError(f"{name} must be a positive real, got {value}")
    return value


def frozen(arr):
    """Mark an array read-only and return it."""
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr
