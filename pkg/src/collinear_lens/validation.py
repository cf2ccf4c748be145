"""Input validation helpers used by the estimators and the functional API."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .exceptions import DataError


def as_float_vector(values, name: str = "values") -> np.ndarray:
    """Coerce to a finite 1-d float64 array."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise DataError(f"{name} must be one-dimensional, got shape {arr.shape}")
    require_finite(arr, name)
    return arr


def as_float_matrix(values, name: str = "X") -> np.ndarray:
    """Coerce to a finite 2-d float64 array with at least one column."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DataError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if arr.shape[1] < 1:
        raise DataError(f"{name} must have at least one column")
    require_finite(arr, name)
    return arr


def require_finite(arr: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(arr)):
        bad = np.argwhere(~np.isfinite(np.atleast_2d(arr)))
        row = int(bad[0][-1]) if arr.ndim == 1 else int(bad[0][0])
        raise DataError(f"{name} contains a non-finite value (first at index {row})")


def resolve_feature_names(X, n_features: int,
                          names: Sequence[str] | None = None) -> tuple[str, ...]:
    """Feature names from an explicit list, a DataFrame, or generated x1..xp."""
    if names is None and hasattr(X, "columns"):
        names = [str(c) for c in X.columns]
    if names is None:
        return tuple(f"x{i + 1}" for i in range(n_features))
    names = tuple(str(n) for n in names)
    if len(names) != n_features:
        raise DataError(
            f"got {len(names)} feature names for {n_features} columns"
        )
    if len(set(names)) != len(names):
        raise DataError("feature names must be unique")
    return names


def check_index(j: int, p: int) -> int:
    """Validate a regressor index, supporting negative indexing."""
    j = int(j)
    if not -p <= j < p:
        raise IndexError(f"regressor index {j} out of range for {p} columns")
    return j % p
