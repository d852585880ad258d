"""Shared configuration, results and column preprocessing for the regression solvers."""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from core.errors import LengthMismatch, NonFiniteInput


@dataclass(frozen=True)
class SolverConfig:
    """Penalized regression settings. `lam=None` selects the solver's automatic rule."""
    lam: Optional[float] = None
    tol: float = 1e-6
    max_iter: int = 1000
    standardize: bool = True
    fit_intercept: bool = True
    # factor applied to the automatic rule when lam is None
    lam_ratio: float = 1e-3

    def __post_init__(self):
        if self.lam is not None and self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if not self.lam_ratio > 0:
            raise ValueError(f"lam_ratio must be > 0, got {self.lam_ratio}")


@dataclass(frozen=True, eq=False)
class FitResult:
    """Coefficients in the original column scale plus solver diagnostics."""
    coefficients: np.ndarray
    intercept: float
    objective: float
    n_iter: int
    converged: bool
    lam: float
    # objective after each coordinate-descent sweep (empty for direct solvers)
    objective_history: tuple = field(default=())

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.coefficients))

    def predict(self, A: np.ndarray) -> np.ndarray:
        return np.asarray(A, dtype=float) @ self.coefficients + self.intercept


@dataclass(frozen=True, eq=False)
class WorkingProblem:
    """
    Centered/standardized copy of (A, y) that the solvers operate on.

    Only the `active` columns (nonconstant after centering) enter `Z`. Working
    coefficients b relate to the original ones by c = b / column_scale, so a
    penalty on c becomes a per-column weighted penalty on b.
    """
    Z: np.ndarray
    y: np.ndarray
    active: np.ndarray
    column_center: np.ndarray
    column_scale: np.ndarray
    y_center: float
    n_columns: int

    @property
    def penalty_weights(self) -> np.ndarray:
        """Weights w with |c_j| = w_j * |b_j| for every working column."""
        return 1.0 / self.column_scale

    def restore(self, b: np.ndarray) -> tuple[np.ndarray, float]:
        """Map working coefficients back to (coefficients, intercept) on the original columns."""
        coefficients = np.zeros(self.n_columns)
        coefficients[self.active] = b / self.column_scale
        intercept = self.y_center - float(self.column_center @ coefficients)
        return coefficients, intercept


def prepare_problem(A, y, cfg: SolverConfig) -> WorkingProblem:
    """
    Validate (A, y) and build the working problem.

    With fit_intercept, y and the columns are centered so the intercept is never
    penalized. With standardize, columns are scaled to unit root-mean-square about
    their center; columns with zero spread get coefficient 0. Scaling only
    preconditions the solve: penalties stay on the original coefficients.
    """
    A = np.array(A, dtype=float, ndmin=2)
    y = np.asarray(y, dtype=float).reshape(-1)
    if A.shape[0] != y.shape[0]:
        raise LengthMismatch(f"A has {A.shape[0]} rows, y has {y.shape[0]} entries")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise LengthMismatch(f"A must be at least 1x1, got {A.shape}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(y))):
        raise NonFiniteInput("Regression input contains NaN or Inf")

    n_columns = A.shape[1]
    if cfg.fit_intercept:
        column_center = A.mean(axis=0)
        y_center = float(y.mean())
    else:
        column_center = np.zeros(n_columns)
        y_center = 0.0

    Z = A - column_center
    yc = y - y_center

    if cfg.standardize:
        spread = np.sqrt(np.mean(Z ** 2, axis=0))
        active = np.flatnonzero(spread > 0)
        Z = Z[:, active] / spread[active]
        column_scale = spread[active]
    else:
        active = np.arange(n_columns)
        column_scale = np.ones(n_columns)

    return WorkingProblem(
        Z=Z,
        y=yc,
        active=active,
        column_center=column_center,
        column_scale=column_scale,
        y_center=y_center,
        n_columns=n_columns,
    )
