"""Penalized linear regression on random feature matrices."""
from solvers.base import FitResult, SolverConfig
from solvers.lasso import solve_lasso
from solvers.ridge import solve_ridge

__all__ = ["FitResult", "SolverConfig", "solve_lasso", "solve_ridge"]
