"""Ridge regression through a Cholesky factorization of the normal equations."""
import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from core.errors import SingularSystem
from solvers.base import FitResult, SolverConfig, prepare_problem

# smallest accepted ratio between Cholesky diagonal entries for an unregularized system
_PIVOT_RATIO = 1e-7


def _spd_solve(matrix: np.ndarray, rhs: np.ndarray, check_rank: bool) -> np.ndarray:
    try:
        factor = cho_factor(matrix, lower=False, check_finite=False)
    except LinAlgError as e:
        raise SingularSystem(f"Normal equations are not positive definite: {e}") from e

    diag = np.abs(np.diag(factor[0]))
    if check_rank and diag.min() <= _PIVOT_RATIO * diag.max():
        raise SingularSystem(
            "Normal equations are rank-deficient (set lambda > 0 to regularize)"
        )
    return cho_solve(factor, rhs, check_finite=False)


def solve_ridge(A, y, cfg: SolverConfig = SolverConfig()) -> FitResult:
    """
    Minimize lam * ||c||_2^2 + ||A c - y||_2^2 via (A^T A + lam I) c = A^T y.

    In the standardized working coordinates the penalty becomes the diagonal
    D = lam * w^2 (see WorkingProblem.penalty_weights), so the solution does not
    depend on cfg.standardize. When lam > 0 and the system has more columns than
    rows, the equivalent m x m system (Z D^-1 Z^T + I) a = y, b = D^-1 Z^T a is
    factorized instead. With `lam=None` the penalty is cfg.lam_ratio times the
    mean squared norm of the (centered) original columns.

    Raises:
        SingularSystem: when lam == 0 and A^T A is rank-deficient
    """
    problem = prepare_problem(A, y, cfg)
    Z, yc = problem.Z, problem.y
    m, p = Z.shape
    weights = problem.penalty_weights

    if p == 0:
        b = np.zeros(0)
        lam = float(cfg.lam or 0.0)
    else:
        if cfg.lam is not None:
            lam = cfg.lam
        else:
            column_norms = np.sum(Z ** 2, axis=0) * problem.column_scale ** 2
            lam = cfg.lam_ratio * float(np.mean(column_norms))
        penalty = lam * weights ** 2
        if lam > 0 and p > m:
            scaled = Z / penalty
            gram = scaled @ Z.T
            gram[np.diag_indices_from(gram)] += 1.0
            b = scaled.T @ _spd_solve(gram, yc, check_rank=False)
        else:
            gram = Z.T @ Z
            gram[np.diag_indices_from(gram)] += penalty
            b = _spd_solve(gram, Z.T @ yc, check_rank=lam == 0)

    residual = yc - Z @ b
    coefficients, intercept = problem.restore(b)
    return FitResult(
        coefficients=coefficients,
        intercept=intercept,
        objective=float(lam * np.sum((weights * b) ** 2) + residual @ residual),
        n_iter=1,
        converged=True,
        lam=float(lam),
    )
