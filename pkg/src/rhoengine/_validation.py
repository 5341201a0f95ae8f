"""Input validation helpers used at every public entry point."""

import numbers

import numpy as np

from .exceptions import DimensionMismatch, NonFinite


def as_square_matrix(M, name="matrix"):
    """Return ``M`` as a finite square complex128 array (a fresh copy)."""
    arr = np.array(M, dtype=np.complex128, copy=True)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"{name} contains NaN or Inf entries")
    return arr


def as_vector(v, name="vector"):
    arr = np.array(v, dtype=np.complex128, copy=True).ravel()
    if arr.size == 0:
        raise DimensionMismatch(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"{name} contains NaN or Inf entries")
    return arr


def check_same_dim(*objs):
    """Raise DimensionMismatch unless all objects expose the same ``dim``."""
    dims = {o.dim for o in objs}
    if len(dims) > 1:
        raise DimensionMismatch(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def check_int(value, name, minimum=None, exc=ValueError):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise exc(f"{name} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise exc(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_positive(value, name, exc=ValueError):
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise exc(f"{name} must be a positive finite number, got {value!r}")
    return value


def readonly(arr):
    arr.setflags(write=False)
    return arr
