"""Input checks shared by the estimators (complex-aware, unlike sklearn's)."""
from __future__ import annotations

import numpy as np
from sklearn.exceptions import NotFittedError

from .lookup_tables import BUILTIN_IDS, LookupTable, builtin_table, load_table


def check_complex_array(x, ndim: int, name: str = "X") -> np.ndarray:
    arr = np.asarray(x)
    if arr.dtype == object or not (np.issubdtype(arr.dtype, np.number)):
        raise TypeError(f"{name} must be numeric, got dtype {arr.dtype}")
    arr = arr.astype(complex, copy=False)
    if ndim == 1 and arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinity")
    return arr


def check_response_problem(B, g):
    """Validate a response matrix and its target vector together."""
    B = check_complex_array(B, 2, "B")
    g = check_complex_array(g, 1, "g")
    if B.shape[0] != g.shape[0]:
        raise ValueError(f"B has {B.shape[0]} rows but g has {g.shape[0]} samples")
    return B, g


def resolve_table(table, levels=None) -> LookupTable:
    """Accept a LookupTable, a built-in id, or a path to a table CSV."""
    if isinstance(table, LookupTable):
        return table
    if isinstance(table, str) and table.upper() in BUILTIN_IDS:
        return builtin_table(table, levels)
    if table is None:
        raise ValueError("a lookup table is required")
    return load_table(table)


def check_is_fitted(estimator, attribute: str):
    if not hasattr(estimator, attribute):
        raise NotFittedError(f"{type(estimator).__name__} is not fitted yet; call fit first")
