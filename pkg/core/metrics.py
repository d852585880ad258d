"""Relative generalization error."""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.errors import LengthMismatch, ZeroVariance


@dataclass(frozen=True)
class EvalReport:
    """Relative generalization error of a prediction set."""
    error: float
    n_points: int
    sample_mean: float


def relative_error(y_true: Sequence[float], y_pred: Sequence[float]) -> EvalReport:
    """
    Residual sum of squares normalized by the spread of `y_true` around its own mean.

    1.0 means the prediction is no better than the constant sample mean.

    Raises:
        LengthMismatch: if the sequences differ in length or have fewer than 2 entries
        ZeroVariance: if all `y_true` values are equal
    """
    y = np.asarray(y_true, dtype=float).reshape(-1)
    y_hat = np.asarray(y_pred, dtype=float).reshape(-1)

    if y.shape != y_hat.shape:
        raise LengthMismatch(f"y_true has {y.size} values, y_pred has {y_hat.size}")
    if y.size < 2:
        raise LengthMismatch("relative_error needs at least 2 values")

    mean = float(np.mean(y))
    denominator = float(np.sum((y - mean) ** 2))
    if denominator == 0.0:
        raise ZeroVariance("y_true has zero variance")

    numerator = float(np.sum((y - y_hat) ** 2))
    return EvalReport(error=numerator / denominator, n_points=int(y.size), sample_mean=mean)
