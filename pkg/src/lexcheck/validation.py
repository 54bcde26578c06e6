"""Input validation helpers shared across estimators and loaders."""
from __future__ import annotations

from typing import Iterable

import numpy as np
from sklearn.exceptions import NotFittedError


def check_fitted(estimator, attributes: Iterable[str]) -> None:
    """Raise NotFittedError unless every trailing-underscore attribute is set."""
    missing = [a for a in attributes if getattr(estimator, a, None) is None]
    if missing:
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted; call fit() first "
            f"(missing {', '.join(missing)})"
        )


def check_finite(array: np.ndarray, name: str) -> np.ndarray:
    array = np.asarray(array, dtype=np.float64)
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{name} contains non-finite values")
    return array


def check_same_dimension(a, b, what: str = "vectors") -> None:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch between {what}: {len(a)} != {len(b)}")


def require(condition: bool, message: str, exc: type[Exception] = ValueError) -> None:
    if not condition:
        raise exc(message)
