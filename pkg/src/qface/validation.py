"""Input validation helpers used across the estimator and library surfaces."""
from __future__ import annotations

import numpy as np

FACE = "face"
NONFACE = "nonface"
LABELS = (FACE, NONFACE)


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def check_power_of_two(n: int, name: str = "dim") -> int:
    n = int(n)
    if n < 2 or not is_power_of_two(n):
        raise ValueError(f"{name} must be a power of two >= 2, got {n}")
    return n


def check_vector(x, name: str = "x") -> np.ndarray:
    """Coerce to a finite 1-D float64 array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_feature_vector(x, name: str = "x") -> np.ndarray:
    """A feature vector: finite, 1-D, power-of-two length."""
    arr = check_vector(x, name)
    check_power_of_two(arr.size, f"{name} length")
    return arr


def check_unit_vector(x, name: str = "x", atol: float = 1e-9) -> np.ndarray:
    arr = check_vector(x, name)
    sq = float(np.dot(arr, arr))
    if abs(sq - 1.0) > atol:
        raise ValueError(f"{name} is not unit-norm (sum of squares {sq!r})")
    return arr


def check_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce to a finite 2-D float64 array (rows are samples)."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_label(label: str) -> str:
    if label not in LABELS:
        raise ValueError(f"label must be one of {LABELS}, got {label!r}")
    return label


def check_labels(y, n: int) -> np.ndarray:
    """Validate a label array of length n over {face, nonface}."""
    arr = np.asarray(y, dtype=object)
    if arr.ndim != 1 or arr.size != n:
        raise ValueError(f"y must be 1-D of length {n}, got shape {arr.shape}")
    for label in arr:
        check_label(label)
    return arr.astype(str)


def check_probability(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return p
