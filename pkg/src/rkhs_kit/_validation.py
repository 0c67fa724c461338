"""Input validation helpers shared by all modules."""

import numpy as np
from sklearn.utils import check_array

from .exceptions import ValidationError


def check_points(X, name="X", min_rows=1):
    """Return ``X`` as a finite float array of shape (N, D).

    A 1-D input is read as N samples of a single feature.
    """
    if (isinstance(X, np.ndarray) and X.dtype == np.float64 and X.ndim == 2
            and X.shape[0] >= min_rows and X.shape[1] > 0 and np.isfinite(X).all()):
        return X
    arr = np.asarray(X, dtype=float) if not hasattr(X, "dtype") else X
    if np.ndim(arr) == 1:
        arr = np.reshape(arr, (-1, 1))
    try:
        arr = check_array(arr, dtype=np.float64, ensure_min_samples=min_rows,
                          ensure_all_finite=True, input_name=name)
    except ValueError as exc:
        raise ValidationError(f"{name}: {exc}") from None
    return arr


def check_values(y, n_rows, name="y"):
    """Return labels as a 2-D float array and whether the input was 1-D."""
    arr = np.asarray(y, dtype=float)
    was_1d = arr.ndim == 1
    if was_1d:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be 1-D or 2-D, got {arr.ndim}-D")
    if arr.shape[0] != n_rows:
        raise ValidationError(f"{name} has {arr.shape[0]} rows, expected {n_rows}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    return arr, was_1d


def check_same_dim(X, Y, names=("X", "Y")):
    if X.shape[1] != Y.shape[1]:
        raise ValidationError(
            f"{names[0]} has {X.shape[1]} columns but {names[1]} has {Y.shape[1]}")


def check_square(A, name="A"):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"{name} must be a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError(f"{name} contains non-finite values")
    return A
