"""Self-supervised fitting of KPCA bandwidths and sparse random feature surrogates."""
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from core.dataset import Dataset, SplitDataset
from core.errors import (
    AllDimensionsFailed,
    AllParticlesFailed,
    DegenerateKernel,
    DimensionMismatch,
    NonFiniteLoss,
    SurrogateError,
)
from core.metrics import EvalReport, relative_error
from features.random_features import (
    BasisKind,
    FeatureWeights,
    RandomFeatureModel,
    draw_feature_weights,
    evaluate_expansion,
    feature_matrix,
)
from kpca.kernel_pca import THETA_MAX, THETA_MIN, KernelParams, KpcaModel, fit_kpca, project
from pso.swarm import PsoConfig, convergence_check, evaluate_swarm, init_swarm, pso_step
from solvers.base import SolverConfig
from solvers.lasso import solve_lasso
from solvers.ridge import solve_ridge
from utils.logger import SurrogateLogger

RIDGE = "ridge"
LASSO = "lasso"


def default_pso_config() -> PsoConfig:
    return PsoConfig(n_particles=10, n_iterations=30, bounds=(THETA_MIN, THETA_MAX))


@dataclass(frozen=True)
class PipelineConfig:
    """Settings of one self-supervised sweep over candidate latent dimensions."""
    dims: tuple = (2, 4, 6, 8)
    n_features: int = 2000
    q: int = 2
    sigma: float = 1.0
    basis: BasisKind = BasisKind.COS
    eta: Optional[float] = None  # None: 1e-2 * sqrt(k)
    lambda_ridge: Optional[float] = None  # None: relative rule of solve_ridge
    lambda_lasso: Optional[float] = None  # None: 1e-3 * lambda_max
    lambda_ratio: float = 1e-3
    tol: float = 1e-6
    max_iter: int = 1000
    fit_intercept: bool = True
    standardize: bool = True
    center_kernel: bool = True
    scale_latent: bool = True
    pso: PsoConfig = field(default_factory=default_pso_config)
    n_workers: int = 1
    seed: int = 0
    # alternative (n_features, q) pairs tried by sweep_grid
    grid: tuple = ()

    def __post_init__(self):
        dims = tuple(int(k) for k in self.dims)
        if not dims:
            raise ValueError("dims must not be empty")
        if list(dims) != sorted(set(dims)) or dims[0] < 1:
            raise ValueError(f"dims must be ascending, distinct and >= 1, got {dims}")
        if self.eta is not None and not self.eta > 0:
            raise ValueError(f"eta must be > 0, got {self.eta}")
        if self.n_features < 1 or self.q < 1:
            raise ValueError("n_features and q must be >= 1")
        if self.n_workers < 1:
            raise ValueError(f"n_workers must be >= 1, got {self.n_workers}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "basis", BasisKind.parse(self.basis))
        object.__setattr__(self, "grid", tuple((int(r), int(q)) for r, q in self.grid))

    @property
    def n_iterations(self) -> int:
        return self.pso.n_iterations

    def eta_for(self, k: int) -> float:
        return self.eta if self.eta is not None else 1e-2 * float(np.sqrt(k))

    def solver_config(self, phase: str) -> SolverConfig:
        lam = self.lambda_ridge if phase == RIDGE else self.lambda_lasso
        return SolverConfig(
            lam=lam,
            tol=self.tol,
            max_iter=self.max_iter,
            standardize=self.standardize,
            fit_intercept=self.fit_intercept,
            lam_ratio=self.lambda_ratio,
        )


@dataclass(frozen=True, eq=False)
class CompositeSurrogate:
    """Reduction map followed by a random feature expansion in the latent space."""
    kpca: KpcaModel
    rfe: RandomFeatureModel
    k_star: int
    validation_error: float

    def __post_init__(self):
        if not (self.rfe.weights.dim == self.kpca.k == self.k_star):
            raise DimensionMismatch(
                f"latent dimensions disagree: features {self.rfe.weights.dim}, "
                f"kpca {self.kpca.k}, k_star {self.k_star}"
            )

    @property
    def input_dim(self) -> int:
        return self.kpca.dim


@dataclass(frozen=True)
class DimensionReport:
    """
    Outcome of the swarm search for one latent dimension.

    `trace[t]` is the swarm's best particle loss after iteration t under the
    phase in `phases[t]`: ridge losses up to the switch, LASSO losses after it
    (bests are reset at the switch). `pso_best_loss` is the smallest entry of
    the last phase. `best_val_error` is the validation error of the final LASSO
    refit at `best_theta`, so it may differ from every trace entry.
    """
    k: int
    best_theta: tuple
    best_val_error: float
    pso_best_loss: float
    iterations: int
    switch_iteration: Optional[int]
    trace: tuple
    phases: tuple
    n_failed_evaluations: int = 0
    nnz: int = 0
    final_phase: str = LASSO
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    @classmethod
    def failure(cls, k: int, error: str) -> "DimensionReport":
        return cls(
            k=k,
            best_theta=(),
            best_val_error=float("inf"),
            pso_best_loss=float("inf"),
            iterations=0,
            switch_iteration=None,
            trace=(),
            phases=(),
            error=error,
        )


@dataclass(frozen=True)
class GridEntry:
    """Best validation error of one (n_features, q) combination."""
    n_features: int
    q: int
    k_star: Optional[int]
    validation_error: float
    reports: tuple


@dataclass(frozen=True, eq=False)
class PipelineResult:
    """Selected surrogate with the per-dimension history and split errors."""
    surrogate: CompositeSurrogate
    reports: tuple
    grid: tuple = ()
    evaluations: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class _ParticleFit:
    kpca: KpcaModel
    rfe: RandomFeatureModel
    loss: float


def derive_seed(seed: int, *key: int) -> int:
    """Independent 32-bit seed for the stream identified by `key`."""
    state = np.random.SeedSequence(seed, spawn_key=key).generate_state(1, dtype=np.uint32)
    return int(state[0])


def predict(model: CompositeSurrogate, points) -> np.ndarray:
    """Surrogate responses: evaluate_expansion(rfe, project(kpca, points))."""
    return evaluate_expansion(model.rfe, project(model.kpca, points))


def evaluate(model: CompositeSurrogate, data: Dataset) -> EvalReport:
    """Relative error of `model` on `data`."""
    return relative_error(data.responses, predict(model, data.points))


def select_best(reports: Sequence[DimensionReport]) -> Optional[int]:
    """Index of the lowest validation error; ties go to the earlier (smaller k) report."""
    best = None
    for i, report in enumerate(reports):
        if report.failed or not np.isfinite(report.best_val_error):
            continue
        if best is None or report.best_val_error < reports[best].best_val_error:
            best = i
    return best


class PipelineService:
    """Service running the self-supervised KPCA + sparse random feature search."""

    def __init__(self, cfg: PipelineConfig, logger: Optional[SurrogateLogger] = None):
        """
        Initialize pipeline service.

        Args:
            cfg: Pipeline configuration
            logger: Structured logger (console-only logger when omitted)
        """
        self.cfg = cfg
        self.logger = logger or SurrogateLogger(log_dir=None)

    def _fit_particle(
        self, theta: np.ndarray, k: int, weights: FeatureWeights, phase: str,
        train: Dataset, val: Dataset,
    ) -> _ParticleFit:
        cfg = self.cfg
        kpca = fit_kpca(train.points, KernelParams(theta), k, center=cfg.center_kernel)
        if kpca.k < k:
            raise DegenerateKernel(f"only {kpca.k} of {k} kernel axes above the eigen floor")

        z_train = project(kpca, train.points)
        if cfg.scale_latent:
            scales = z_train.std(axis=0)
            if not np.all(scales > 0):
                raise DegenerateKernel("a latent axis has zero spread on the training data")
            weights = weights.rescaled(scales)

        A = feature_matrix(z_train, weights, cfg.basis)
        solve = solve_ridge if phase == RIDGE else solve_lasso
        fit = solve(A, train.responses, cfg.solver_config(phase))
        rfe = RandomFeatureModel(cfg.basis, weights, fit.coefficients, fit.intercept)

        prediction = evaluate_expansion(rfe, project(kpca, val.points))
        loss = relative_error(val.responses, prediction).error
        if not np.isfinite(loss):
            raise NonFiniteLoss(f"validation loss is {loss}")
        return _ParticleFit(kpca=kpca, rfe=rfe, loss=loss)

    def _particle_loss(self, theta, k, weights, phase, train, val) -> tuple[float, Optional[str]]:
        try:
            return self._fit_particle(theta, k, weights, phase, train, val).loss, None
        except Exception as e:
            return float("inf"), f"{type(e).__name__}: {e}"

    def fit_dimension(
        self, train: Dataset, val: Dataset, k: int
    ) -> tuple[DimensionReport, CompositeSurrogate]:
        """
        Swarm search over KPCA bandwidths for latent dimension `k`.

        Feature weights are drawn once and shared by every particle and iteration.
        Particles are scored with ridge fits until every particle moves by at most
        eta in one step, then with LASSO fits. The best bandwidths are refit with
        LASSO to produce the returned surrogate.

        Raises:
            DimensionMismatch: k outside [1, d] or train/val dimensions differ
            AllParticlesFailed: every particle failed in one iteration
        """
        cfg = self.cfg
        d = train.dim
        if val.dim != d:
            raise DimensionMismatch(f"train has dimension {d}, validation has {val.dim}")
        if not 1 <= k <= d:
            raise DimensionMismatch(f"latent dimension {k} outside [1, {d}]")

        weights = draw_feature_weights(
            dim=k, q=min(cfg.q, k), R=cfg.n_features, sigma=cfg.sigma,
            seed=derive_seed(cfg.seed, k, 0),
        )
        pso_cfg = replace(cfg.pso, seed=derive_seed(cfg.seed, k, 1))
        state = init_swarm(pso_cfg, d)
        eta = cfg.eta_for(k)

        self.logger.log_dimension_start(k, pso_cfg.n_particles, pso_cfg.n_iterations, cfg.n_features)

        phase = RIDGE
        switch_iteration = None
        trace, phases = [], []
        n_failed = 0

        for t in range(pso_cfg.n_iterations):
            results = evaluate_swarm(
                lambda theta: self._particle_loss(theta, k, weights, phase, train, val),
                state.positions,
                cfg.n_workers,
            )
            losses = [loss for loss, _ in results]
            failures = [(p, err) for p, (_, err) in enumerate(results) if err is not None]
            for p, err in failures:
                self.logger.log_particle_failure(k, t, p, err)
            n_failed += len(failures)
            if len(failures) == len(results):
                raise AllParticlesFailed(f"all {len(results)} particles failed at iteration {t} (k={k})")

            previous = state.positions
            state = pso_step(state, losses, pso_cfg, allow_failures=True)
            trace.append(state.gbest_loss)
            phases.append(phase)
            self.logger.log_iteration(k, t, state.gbest_loss, phase, len(failures))

            if phase == RIDGE and convergence_check(previous, state.positions, eta):
                phase = LASSO
                switch_iteration = t
                # LASSO losses are not comparable with ridge losses
                state = state.reset_bests()
                self.logger.log_phase_switch(k, t)

        final = self._fit_particle(state.gbest_position, k, weights, LASSO, train, val)
        surrogate = CompositeSurrogate(kpca=final.kpca, rfe=final.rfe, k_star=k, validation_error=0.0)
        val_error = evaluate(surrogate, val).error
        surrogate = replace(surrogate, validation_error=val_error)

        last_phase = phases[-1]
        report = DimensionReport(
            k=k,
            best_theta=tuple(float(v) for v in final.kpca.params.theta),
            best_val_error=val_error,
            pso_best_loss=min(v for v, ph in zip(trace, phases) if ph == last_phase),
            iterations=pso_cfg.n_iterations,
            switch_iteration=switch_iteration,
            trace=tuple(trace),
            phases=tuple(phases),
            n_failed_evaluations=n_failed,
            nnz=final.rfe.nnz,
            final_phase=LASSO,
        )
        self.logger.log_dimension_complete(k, val_error, switch_iteration, pso_cfg.n_iterations, final.rfe.nnz)
        return report, surrogate

    def sweep_dimensions(
        self, train: Dataset, val: Dataset
    ) -> tuple[CompositeSurrogate, list[DimensionReport]]:
        """
        Fit every k in cfg.dims and keep the lowest validation error (ties: smaller k).

        A dimension whose fit fails for any reason is reported with `error` set.

        Raises:
            DimensionMismatch: a candidate k exceeds the input dimension
            AllDimensionsFailed: no dimension produced a surrogate
        """
        too_large = [k for k in self.cfg.dims if k > train.dim]
        if too_large:
            raise DimensionMismatch(f"latent dimensions {too_large} exceed input dimension {train.dim}")

        reports: list[DimensionReport] = []
        surrogates: list[Optional[CompositeSurrogate]] = []
        for k in self.cfg.dims:
            try:
                report, surrogate = self.fit_dimension(train, val, k)
            except Exception as e:
                message = str(e) if isinstance(e, SurrogateError) else f"{type(e).__name__}: {e}"
                self.logger.log_dimension_failed(k, message)
                report, surrogate = DimensionReport.failure(k, message), None
            reports.append(report)
            surrogates.append(surrogate)

        best = select_best(reports)
        if best is None:
            raise AllDimensionsFailed(f"no surrogate for any latent dimension in {self.cfg.dims}")

        chosen = surrogates[best]
        self.logger.log_selection(chosen.k_star, chosen.validation_error, self.cfg.n_features, self.cfg.q)
        return chosen, reports

    def sweep_grid(
        self, train: Dataset, val: Dataset
    ) -> tuple[CompositeSurrogate, list[DimensionReport], list[GridEntry]]:
        """
        Run sweep_dimensions for every (n_features, q) in cfg.grid (or just the
        configured pair) and keep the lowest validation error (ties: earlier entry).
        """
        combos = self.cfg.grid or ((self.cfg.n_features, self.cfg.q),)
        entries: list[GridEntry] = []
        best = None

        for n_features, q in combos:
            service = PipelineService(replace(self.cfg, n_features=n_features, q=q), self.logger)
            try:
                surrogate, reports = service.sweep_dimensions(train, val)
            except AllDimensionsFailed as e:
                self.logger.log_warning(f"Grid entry R={n_features} q={q} failed: {e}")
                entries.append(GridEntry(n_features, q, None, float("inf"), ()))
                continue
            entries.append(GridEntry(n_features, q, surrogate.k_star, surrogate.validation_error, tuple(reports)))
            if best is None or surrogate.validation_error < best[0].validation_error:
                best = (surrogate, reports)

        if best is None:
            raise AllDimensionsFailed("every grid entry failed")
        return best[0], best[1], entries

    def run(self, data: SplitDataset) -> PipelineResult:
        """Fit on train/validation and report the error of the selection on every split."""
        surrogate, reports, grid = self.sweep_grid(data.train, data.validation)

        evaluations = {}
        for split, part in (("train", data.train), ("validation", data.validation), ("test", data.test)):
            if part is None:
                continue
            report = evaluate(surrogate, part)
            evaluations[split] = report
            self.logger.log_evaluation(split, report.error, report.n_points)

        return PipelineResult(
            surrogate=surrogate,
            reports=tuple(reports),
            grid=tuple(grid) if self.cfg.grid else (),
            evaluations=evaluations,
        )


def fit_dimension(
    train: Dataset, val: Dataset, k: int, cfg: PipelineConfig, logger: Optional[SurrogateLogger] = None
) -> tuple[DimensionReport, CompositeSurrogate]:
    return PipelineService(cfg, logger).fit_dimension(train, val, k)


def sweep_dimensions(
    train: Dataset, val: Dataset, cfg: PipelineConfig, logger: Optional[SurrogateLogger] = None
) -> tuple[CompositeSurrogate, list[DimensionReport]]:
    return PipelineService(cfg, logger).sweep_dimensions(train, val)
