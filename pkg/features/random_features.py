"""q-sparse random feature weights, feature matrices and fitted expansions."""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from core.errors import DimensionMismatch


class BasisKind(str, Enum):
    """Real-valued basis function applied to <x, omega>."""
    COS = "cos"
    SIN = "sin"
    RELU = "relu"

    @classmethod
    def parse(cls, value: "str | BasisKind") -> "BasisKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(
                f"Unknown basis: {value}. Supported: {[b.value for b in cls]}"
            ) from None

    def apply(self, t: np.ndarray) -> np.ndarray:
        if self is BasisKind.COS:
            return np.cos(t)
        if self is BasisKind.SIN:
            return np.sin(t)
        return np.maximum(t, 0.0)


@dataclass(frozen=True, eq=False)
class FeatureWeights:
    """
    R weight vectors in R^dim, each nonzero only on its support.

    `supports` is (R, q_eff) with sorted coordinate indices, `values` the matching
    nonzero entries. `weights` is the dense (R, dim) view.
    """
    dim: int
    q: int
    supports: np.ndarray
    values: np.ndarray
    sigma: float
    seed: Optional[int]

    def __post_init__(self):
        supports = np.array(self.supports, dtype=np.int64, ndmin=2)
        values = np.array(self.values, dtype=float, ndmin=2)
        if supports.shape != values.shape:
            raise ValueError(f"supports {supports.shape} and values {values.shape} differ in shape")
        if supports.shape[0] < 1:
            raise ValueError("FeatureWeights needs at least one feature")
        if supports.shape[1] != min(self.q, self.dim):
            raise ValueError(
                f"Each feature needs {min(self.q, self.dim)} active coordinates, got {supports.shape[1]}"
            )
        if supports.min() < 0 or supports.max() >= self.dim:
            raise ValueError(f"Support index out of range for dim={self.dim}")

        weights = np.zeros((supports.shape[0], self.dim))
        np.put_along_axis(weights, supports, values, axis=1)

        for arr in (supports, values, weights):
            arr.setflags(write=False)
        object.__setattr__(self, "supports", supports)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_weights", weights)

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def n_features(self) -> int:
        return self.supports.shape[0]

    def rescaled(self, scales: np.ndarray) -> "FeatureWeights":
        """
        Divide coordinate i of every weight vector by `scales[i]`.

        <x, omega / s> = <x / s, omega>, so features built on raw inputs behave like
        the original draw applied to inputs whose axes were divided by `scales`.
        """
        scales = np.asarray(scales, dtype=float).reshape(-1)
        if scales.shape[0] != self.dim:
            raise DimensionMismatch(f"{scales.shape[0]} scales for dim={self.dim}")
        return FeatureWeights(
            dim=self.dim,
            q=self.q,
            supports=self.supports,
            values=self.values / scales[self.supports],
            sigma=self.sigma,
            seed=self.seed,
        )


@dataclass(frozen=True, eq=False)
class RandomFeatureModel:
    """Fitted expansion f(x) = intercept + sum_j c_j phi(<x, omega_j>)."""
    basis: BasisKind
    weights: FeatureWeights
    coefficients: np.ndarray
    intercept: float = 0.0

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=float).reshape(-1)
        if coefficients.shape[0] != self.weights.n_features:
            raise ValueError(
                f"{coefficients.shape[0]} coefficients for {self.weights.n_features} features"
            )
        if not (np.all(np.isfinite(coefficients)) and np.isfinite(self.intercept)):
            raise ValueError("RandomFeatureModel coefficients must be finite")
        coefficients.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)
        object.__setattr__(self, "basis", BasisKind.parse(self.basis))
        object.__setattr__(self, "intercept", float(self.intercept))

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.coefficients))


def draw_feature_weights(
    dim: int, q: int, R: int, sigma: float = 1.0, seed: Optional[int] = 0
) -> FeatureWeights:
    """
    Draw R q-sparse Gaussian weight vectors.

    Supports are sampled uniformly (with replacement across features) among the
    size-min(q, dim) subsets of the coordinates; nonzero entries are N(0, sigma^2).
    q larger than dim is clamped to dim.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if R < 1:
        raise ValueError(f"R must be >= 1, got {R}")
    if not sigma > 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")

    q_eff = min(q, dim)
    rng = np.random.default_rng(seed)

    # first q_eff entries of a uniform random permutation per row = uniform q_eff-subset
    keys = rng.random((R, dim))
    supports = np.sort(np.argsort(keys, axis=1, kind="stable")[:, :q_eff], axis=1)
    values = rng.normal(0.0, sigma, size=(R, q_eff))

    return FeatureWeights(dim=dim, q=q, supports=supports, values=values, sigma=sigma, seed=seed)


def _as_points(points, dim: int) -> np.ndarray:
    x = np.array(points, dtype=float, ndmin=2)
    if x.shape[1] != dim:
        raise DimensionMismatch(f"points have dimension {x.shape[1]}, expected {dim}")
    return x


def feature_matrix(points, weights: FeatureWeights, basis: "BasisKind | str") -> np.ndarray:
    """A[i, j] = phi(<x_i, omega_j>), shape (m, R)."""
    x = _as_points(points, weights.dim)
    return BasisKind.parse(basis).apply(x @ weights.weights.T)


def evaluate_expansion(model: RandomFeatureModel, points) -> np.ndarray:
    """intercept + A c for A = feature_matrix(points, model.weights, model.basis)."""
    A = feature_matrix(points, model.weights, model.basis)
    return A @ model.coefficients + model.intercept
