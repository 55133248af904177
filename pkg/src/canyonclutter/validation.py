"""Input validation helpers used across the public API."""

import numpy as np

_U64_MAX = 2**64 - 1


def check_positive(name: str, value) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be strictly positive, got {value!r}")
    return value


def check_nonnegative(name: str, value) -> float:
    value = float(value)
    if not np.isfinite(value) or value < 0.0:
        raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
    return value


def check_count(name: str, value, minimum: int = 1) -> int:
    if int(value) != value:
        raise ValueError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_seed(value) -> int:
    if int(value) != value:
        raise ValueError(f"seed must be an integer, got {value!r}")
    value = int(value)
    if not 0 <= value <= _U64_MAX:
        raise ValueError(f"seed must fit in an unsigned 64-bit integer, got {value}")
    return value


def check_correlation(name: str, value) -> float:
    value = float(value)
    if not np.isfinite(value) or not -1.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [-1, 1], got {value!r}")
    return value


def check_power_matrix(x) -> np.ndarray:
    """Validate an azimuth x time matrix of nonnegative power ratios."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.size == 0:
        raise ValueError(f"power matrix must be a nonempty 2-D array, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("power matrix contains non-finite values")
    if np.any(x < 0.0):
        raise ValueError("power matrix contains negative values")
    return x


def check_power_series(x, min_len: int = 1) -> np.ndarray:
    """Validate a 1-D series of nonnegative power values."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"power series must be 1-D, got shape {x.shape}")
    if x.size < min_len:
        raise ValueError(f"power series needs at least {min_len} samples, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError("power series contains non-finite values")
    if np.any(x < 0.0):
        raise ValueError("power series contains negative values")
    return x
