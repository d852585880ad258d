"""Kernel PCA with a nonisotropic Gaussian kernel."""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import eigh
from scipy.spatial.distance import cdist

from core.errors import DegenerateKernel, DimensionMismatch, InsufficientData

logger = logging.getLogger(__name__)

THETA_MIN = 1e-3
THETA_MAX = 1e3
EIGEN_FLOOR = 1e-10  # relative to the largest eigenvalue


@dataclass(frozen=True, eq=False)
class KernelParams:
    """Per-coordinate Gaussian bandwidths, clamped to [THETA_MIN, THETA_MAX]."""
    theta: np.ndarray

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float).reshape(-1)
        if theta.size < 1 or not np.all(np.isfinite(theta)):
            raise ValueError("theta must be a nonempty finite vector")
        theta = np.clip(theta, THETA_MIN, THETA_MAX)
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @property
    def dim(self) -> int:
        return self.theta.shape[0]


@dataclass(frozen=True, eq=False)
class KpcaModel:
    """
    Fitted reduction map x -> z in R^k.

    alphas is (N, k); column m holds the coefficients of axis m, scaled so that
    eigenvalues[m] * ||alphas[:, m]||^2 = 1.
    """
    training_points: np.ndarray
    params: KernelParams
    alphas: np.ndarray
    eigenvalues: np.ndarray
    row_means: np.ndarray
    grand_mean: float
    centered: bool = True
    # coordinates of the training points, filled in by fit_kpca only
    fitted_coordinates: Optional[np.ndarray] = None

    @property
    def k(self) -> int:
        return self.alphas.shape[1]

    @property
    def dim(self) -> int:
        return self.training_points.shape[1]


def _check_dim(points, dim: int) -> np.ndarray:
    x = np.array(points, dtype=float, ndmin=2)
    if x.shape[1] != dim:
        raise DimensionMismatch(f"points have dimension {x.shape[1]}, expected {dim}")
    return x


def gaussian_kernel(x, y, params: KernelParams) -> float:
    """exp(-1/2 * sum_i (x_i - y_i)^2 / theta_i^2)."""
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.shape != y.shape or x.shape[0] != params.dim:
        raise DimensionMismatch(
            f"kernel arguments of dimension {x.shape[0]} and {y.shape[0]} for theta of dimension {params.dim}"
        )
    return float(np.exp(-0.5 * np.sum(((x - y) / params.theta) ** 2)))


def kernel_matrix(X, Y, params: KernelParams) -> np.ndarray:
    """K[i, j] = gaussian_kernel(X[i], Y[j], params)."""
    X = _check_dim(X, params.dim) / params.theta
    Y = _check_dim(Y, params.dim) / params.theta
    return np.exp(-0.5 * cdist(X, Y, metric="sqeuclidean"))


def fit_kpca(points, params: KernelParams, k: int, center: bool = True) -> KpcaModel:
    """
    Fit the k leading kernel principal axes of `points`.

    The kernel matrix is double-centered unless `center=False`. Eigenpairs below
    EIGEN_FLOOR times the largest eigenvalue are discarded; if fewer than k
    survive, the model keeps the survivors and a warning is logged.

    Raises:
        InsufficientData: N < 2 or k > N
        DegenerateKernel: no eigenvalue survives the floor
    """
    X = _check_dim(points, params.dim)
    n = X.shape[0]
    if n < 2:
        raise InsufficientData(f"KPCA needs at least 2 points, got {n}")
    if not 1 <= k <= n:
        raise InsufficientData(f"k must be in [1, {n}], got {k}")

    K = kernel_matrix(X, X, params)
    if center:
        row_means = K.mean(axis=1)
        grand_mean = float(row_means.mean())
        K_work = K - row_means[:, None] - row_means[None, :] + grand_mean
    else:
        row_means = np.zeros(n)
        grand_mean = 0.0
        K_work = K

    # full spectrum; the top k pairs are sliced off below
    eigvals, eigvecs = eigh(K_work, check_finite=False, driver="evd")
    eigvals = eigvals[::-1][:k]
    eigvecs = eigvecs[:, ::-1][:, :k]

    largest = eigvals[0] if eigvals.size else 0.0
    if not largest > 0:
        raise DegenerateKernel(f"Largest kernel eigenvalue is {largest:.3e}")
    keep = eigvals > EIGEN_FLOOR * largest
    if not np.all(keep):
        logger.warning(
            f"KPCA kept {int(keep.sum())} of {k} axes; remaining eigenvalues are below the floor"
        )
    eigvals = eigvals[keep]
    eigvecs = eigvecs[:, keep]

    # deterministic sign: largest-magnitude entry of each axis is positive
    pivots = eigvecs[np.argmax(np.abs(eigvecs), axis=0), np.arange(eigvecs.shape[1])]
    eigvecs = eigvecs * np.where(pivots < 0, -1.0, 1.0)

    alphas = eigvecs / np.sqrt(eigvals)
    return KpcaModel(
        training_points=X.copy(),
        params=params,
        alphas=alphas,
        eigenvalues=eigvals,
        row_means=row_means,
        grand_mean=grand_mean,
        centered=center,
        fitted_coordinates=K_work @ alphas,
    )


def project(model: KpcaModel, points) -> np.ndarray:
    """Coordinates z_m(x) = sum_j alphas[j, m] * centered_kernel(x, x_j), shape (n, k)."""
    X = _check_dim(points, model.dim)
    K = kernel_matrix(X, model.training_points, model.params)
    if model.centered:
        K = K - K.mean(axis=1, keepdims=True) - model.row_means[None, :] + model.grand_mean
    return K @ model.alphas
