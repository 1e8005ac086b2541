"""Input validation helpers in the spirit of ``sklearn.utils.validation``."""
import math
import numbers

import numpy as np

from .exceptions import InputError, ResourceError

DEFAULT_MAX_N = 24
_max_n = DEFAULT_MAX_N


def set_max_n(value):
    """Change the global cap on the number of coordinates. Returns the old cap."""
    global _max_n
    old = _max_n
    if value < 1:
        raise InputError("max_n must be positive")
    _max_n = int(value)
    return old


def get_max_n():
    return _max_n


def check_n(n, max_n=None):
    if not isinstance(n, numbers.Integral) or isinstance(n, bool):
        raise InputError(f"n must be an integer, got {n!r}")
    n = int(n)
    cap = _max_n if max_n is None else max_n
    if n < 0:
        raise InputError(f"n must be non-negative, got {n}")
    if n > cap:
        raise ResourceError(f"n={n} exceeds the enumeration cap {cap}")
    return n


def n_from_length(length):
    n = int(length).bit_length() - 1
    if length < 1 or (1 << n) != length:
        raise InputError(f"table length {length} is not a power of two")
    return n


def check_truth_table(table, n=None):
    """Validate a 0/1 table and return it as a read-only uint8 array."""
    arr = np.asarray(table)
    if arr.ndim != 1:
        raise InputError("truth table must be one-dimensional")
    length_n = n_from_length(arr.size)
    if n is not None and length_n != n:
        raise InputError(f"table length {arr.size} does not match n={n} (expected {1 << n})")
    check_n(length_n)
    if arr.dtype == bool:
        arr = arr.astype(np.uint8)
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise InputError("truth table entries must be 0 or 1")
    out = np.ascontiguousarray(arr, dtype=np.uint8).copy()
    out.flags.writeable = False
    return out


def check_real_values(values, n=None):
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise InputError("values must be one-dimensional")
    length_n = n_from_length(arr.size)
    if n is not None and length_n != n:
        raise InputError(f"values length {arr.size} does not match n={n}")
    check_n(length_n)
    if not np.all(np.isfinite(arr)):
        raise InputError("values must be finite")
    return arr


def check_mask(mask, n):
    """Validate a subset bitmask over [n]."""
    if isinstance(mask, (set, frozenset, list, tuple)):
        mask = mask_from_coords(mask, n)
    if not isinstance(mask, numbers.Integral) or isinstance(mask, bool):
        raise InputError(f"mask must be an integer bitmask, got {mask!r}")
    mask = int(mask)
    if mask < 0 or mask >> n:
        raise InputError(f"mask {mask:#x} has bits outside [n] for n={n}")
    return mask


def mask_from_coords(coords, n=None):
    """Bitmask for a collection of one-based coordinates, e.g. ``{1, 3} -> 0b101``."""
    mask = 0
    for i in coords:
        i = int(i)
        if i < 1 or (n is not None and i > n):
            raise InputError(f"coordinate {i} outside [1, {n}]")
        mask |= 1 << (i - 1)
    return mask


def coords_from_mask(mask):
    """One-based coordinates of a bitmask, increasing."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def check_bits_matrix(X, n):
    """Accept an (N, n) 0/1 matrix or a vector of point indices; return int64 indices."""
    X = np.asarray(X)
    if X.ndim == 1:
        idx = X.astype(np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= (1 << n)):
            raise InputError("point index out of range")
        return idx
    if X.ndim != 2 or X.shape[1] != n:
        raise InputError(f"expected shape (N, {n}), got {X.shape}")
    if X.size and not np.all((X == 0) | (X == 1)):
        raise InputError("bit matrix entries must be 0 or 1")
    weights = (1 << np.arange(n, dtype=np.int64))
    return X.astype(np.int64) @ weights


def check_probability(p, name, open_interval=False):
    p = float(p)
    if math.isnan(p) or p < 0 or p > 1 or (open_interval and p in (0.0, 1.0)):
        raise InputError(f"{name} must lie in {'(0,1)' if open_interval else '[0,1]'}, got {p}")
    return p
