"""Sobol G-function benchmark sampled on an unscrambled Sobol sequence."""
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.stats import qmc

from core.dataset import Dataset, SplitDataset
from core.errors import DimTooSmall, DomainViolation, UnsupportedDimension

# leading coefficients of the reference configuration; the remainder is padded with 500
REFERENCE_U_HEAD = (1.0, 2.0, 5.0, 20.0, 50.0, 100.0, 500.0)
REFERENCE_U_PAD = 500.0

# scipy ships the Joe-Kuo direction numbers up to this dimension
MAX_SOBOL_DIM = 21201


@dataclass(frozen=True, eq=False)
class SobolSpec:
    """Shape of a G-function benchmark dataset."""
    dim: int
    u: np.ndarray
    n_train: int
    n_val: int
    n_test: int
    skip: int = 1

    def __post_init__(self):
        u = np.array(self.u, dtype=float).reshape(-1)
        if u.shape[0] != self.dim:
            raise ValueError(f"u has {u.shape[0]} entries for dim={self.dim}")
        if np.any(u < 0) or not np.all(np.isfinite(u)):
            raise ValueError("u entries must be finite and >= 0")
        if min(self.n_train, self.n_val, self.n_test) < 1:
            raise ValueError("Every split count must be >= 1")
        if self.skip < 0:
            raise ValueError(f"skip must be >= 0, got {self.skip}")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @property
    def n_total(self) -> int:
        return self.n_train + self.n_val + self.n_test


@dataclass(frozen=True, eq=False)
class GFunctionMoments:
    """Closed-form moments and Sobol indices of the G-function under U[0,1]^K inputs."""
    mean: float
    variance: float
    first_effect_variances: np.ndarray
    first_order_indices: np.ndarray
    total_indices: np.ndarray = field(repr=False)


def paper_u(dim: int) -> np.ndarray:
    """(1, 2, 5, 20, 50, 100, 500, 500, ...) of length `dim` (dim >= 7)."""
    if dim < len(REFERENCE_U_HEAD):
        raise DimTooSmall(f"paper_u needs dim >= {len(REFERENCE_U_HEAD)}, got {dim}")
    u = np.full(dim, REFERENCE_U_PAD)
    u[:len(REFERENCE_U_HEAD)] = REFERENCE_U_HEAD
    return u


def g_function(x, u) -> float:
    """prod_i (|4 x_i - 2| + u_i) / (1 + u_i) for x in [0, 1]^K."""
    values = g_function_batch(np.asarray(x, dtype=float).reshape(1, -1), u)
    return float(values[0])


def g_function_batch(points, u) -> np.ndarray:
    """G-function of every row of `points`."""
    x = np.array(points, dtype=float, ndmin=2)
    u = np.asarray(u, dtype=float).reshape(-1)
    if x.shape[1] != u.shape[0]:
        raise ValueError(f"points have dimension {x.shape[1]}, u has {u.shape[0]} entries")
    if np.any(u < 0):
        raise ValueError("u entries must be >= 0")
    if not np.all((x >= 0.0) & (x <= 1.0)):
        raise DomainViolation("G-function inputs must lie in [0, 1]")
    factors = (np.abs(4.0 * x - 2.0) + u) / (1.0 + u)
    return np.prod(factors, axis=1)


def g_function_moments(u) -> GFunctionMoments:
    """
    Analytic statistics: each factor has mean 1 and variance 1 / (3 (1 + u_i)^2).
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    first_effect = 1.0 / (3.0 * (1.0 + u) ** 2)
    variance = float(np.prod(1.0 + first_effect) - 1.0)
    total = np.empty_like(first_effect)
    for i in range(u.shape[0]):
        others = np.delete(first_effect, i)
        total[i] = first_effect[i] * np.prod(1.0 + others) / variance
    return GFunctionMoments(
        mean=1.0,
        variance=variance,
        first_effect_variances=first_effect,
        first_order_indices=first_effect / variance,
        total_indices=total,
    )


def sobol_sequence(dim: int, n: int, skip: int = 1) -> np.ndarray:
    """
    First `n` points of the unscrambled Sobol sequence in [0, 1)^dim after
    discarding `skip` points (the first point of the sequence is the origin).
    """
    if not 1 <= dim <= MAX_SOBOL_DIM:
        raise UnsupportedDimension(f"Sobol sequence supports dimensions 1..{MAX_SOBOL_DIM}, got {dim}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if skip < 0:
        raise ValueError(f"skip must be >= 0, got {skip}")

    engine = qmc.Sobol(d=dim, scramble=False)
    with warnings.catch_warnings():
        # scipy warns on sample counts that are not powers of two
        warnings.simplefilter("ignore", UserWarning)
        if skip:
            engine.fast_forward(skip)
        return engine.random(n)


def make_sobol_dataset(spec: SobolSpec, column_names: Optional[tuple] = None) -> SplitDataset:
    """Contiguous train/val/test blocks of consecutive Sobol points with G-function responses."""
    points = sobol_sequence(spec.dim, spec.n_total, spec.skip)
    responses = g_function_batch(points, spec.u)
    names = column_names or tuple(f"x{i + 1}" for i in range(spec.dim))

    a = spec.n_train
    b = spec.n_train + spec.n_val
    return SplitDataset(
        train=Dataset(points[:a], responses[:a], names),
        validation=Dataset(points[a:b], responses[a:b], names),
        test=Dataset(points[b:], responses[b:], names),
    )
