"""LASSO by cyclic coordinate descent with covariance updates."""
import numpy as np

from solvers.base import FitResult, SolverConfig, WorkingProblem, prepare_problem


def lambda_max(problem: WorkingProblem) -> float:
    """Smallest lambda for which the LASSO solution of `problem` is exactly zero."""
    if problem.Z.shape[1] == 0:
        return 0.0
    return float(2.0 * np.max(np.abs(problem.Z.T @ problem.y) * problem.column_scale))


class _GramColumns:
    """Columns of Z^T Z, computed the first time a coefficient moves."""

    def __init__(self, Z: np.ndarray):
        self.Z = Z
        self.cache: dict[int, np.ndarray] = {}

    def __getitem__(self, j: int) -> np.ndarray:
        column = self.cache.get(j)
        if column is None:
            column = self.Z.T @ self.Z[:, j]
            self.cache[j] = column
        return column


def _soft_threshold(value: float, threshold: float) -> float:
    if value > threshold:
        return value - threshold
    if value < -threshold:
        return value + threshold
    return 0.0


def _sweep(grad: np.ndarray, b: np.ndarray, col_sq: list, thresholds: list,
           gram: _GramColumns, columns) -> float:
    """One coordinate pass over `columns`; b and grad = Z^T residual are updated in place."""
    max_delta = 0.0
    for j in columns:
        norm_sq = col_sq[j]
        if norm_sq == 0.0:
            continue
        old = b[j]
        new = _soft_threshold(grad[j] + norm_sq * old, thresholds[j]) / norm_sq
        delta = new - old
        if delta != 0.0:
            grad -= delta * gram[j]
            b[j] = new
            max_delta = max(max_delta, abs(delta))
    return max_delta


def _objective(lam: float, weights: np.ndarray, b: np.ndarray, residual: np.ndarray) -> float:
    return float(lam * np.sum(weights * np.abs(b)) + residual @ residual)


def solve_lasso(A, y, cfg: SolverConfig = SolverConfig()) -> FitResult:
    """
    Minimize lam * ||c||_1 + ||A c - y||_2^2 by cyclic coordinate descent.

    The first pass visits every column. Later passes cycle over the nonzero
    coefficients until no coefficient moves by more than cfg.tol, then revisit
    them together with every zero coefficient whose optimality condition is
    violated; the fit has converged when such a pass moves nothing by more than
    cfg.tol. Running out of sweeps is reported through `converged=False`.

    Column standardization changes the working coordinates only: the penalty,
    lambda_max and the reported objective all refer to the original columns.
    """
    problem = prepare_problem(A, y, cfg)
    lam = cfg.lam if cfg.lam is not None else cfg.lam_ratio * lambda_max(problem)

    Z = problem.Z
    n_active = Z.shape[1]
    weights = problem.penalty_weights
    threshold_array = 0.5 * lam * weights
    thresholds = threshold_array.tolist()
    col_sq = np.einsum("ij,ij->j", Z, Z).tolist()
    gram = _GramColumns(Z)

    b = np.zeros(n_active)
    grad = Z.T @ problem.y
    residual = problem.y.copy()

    history = []
    converged = False
    n_iter = 0
    columns = range(n_active)
    full_pass = True

    while n_iter < cfg.max_iter:
        max_delta = _sweep(grad, b, col_sq, thresholds, gram, columns)
        n_iter += 1
        residual = problem.y - Z @ b
        history.append(_objective(lam, weights, b, residual))

        if max_delta > cfg.tol:
            columns = np.flatnonzero(b).tolist()
            full_pass = False
        elif full_pass:
            converged = True
            break
        else:
            grad = Z.T @ residual
            columns = np.flatnonzero((b != 0.0) | (np.abs(grad) > threshold_array)).tolist()
            full_pass = True

    coefficients, intercept = problem.restore(b)
    return FitResult(
        coefficients=coefficients,
        intercept=intercept,
        objective=_objective(lam, weights, b, residual),
        n_iter=n_iter,
        converged=converged,
        lam=float(lam),
        objective_history=tuple(history),
    )
