"""Configuration management for surrogate fitting experiments."""
import hashlib
from dataclasses import dataclass, field, replace
from itertools import product
from pathlib import Path
from typing import Mapping, Optional

from dotenv import dotenv_values

from bench.sobol_g import SobolSpec, paper_u
from features.random_features import BasisKind
from kpca.kernel_pca import THETA_MAX, THETA_MIN
from pso.swarm import PRESETS, PsoConfig
from services.pipeline_service import PipelineConfig

# Every accepted key with its default; an empty string means "unset"
DEFAULTS: dict[str, str] = {
    "SEED": "0",
    # pipeline
    "DIMS": "2,4,6,8",
    "N_FEATURES": "2000",
    "SPARSITY_ORDER": "2",
    "SIGMA": "1.0",
    "BASIS": "cos",
    "ETA": "",
    "LAMBDA_RIDGE": "",
    "LAMBDA_LASSO": "",
    "LAMBDA_RATIO": "1e-3",
    "TOL": "1e-6",
    "MAX_ITER": "1000",
    "FIT_INTERCEPT": "true",
    "STANDARDIZE": "true",
    "CENTER_KERNEL": "true",
    "SCALE_LATENT": "true",
    "N_WORKERS": "1",
    "GRID_N_FEATURES": "",
    "GRID_SPARSITY_ORDER": "",
    # swarm
    "N_PARTICLES": "10",
    "N_ITERATIONS": "30",
    "PSO_PRESET": "standard",
    "PSO_INERTIA": "",
    "PSO_C_COGNITIVE": "",
    "PSO_C_SOCIAL": "",
    "PSO_XI1": "",
    "PSO_XI2": "",
    "THETA_INIT_LOW": "0.0",
    "THETA_INIT_HIGH": "1.0",
    # data source: Sobol benchmark, separate CSVs, or one CSV split by count
    "SOBOL_DIM": "",
    "SOBOL_U": "paper",
    "SOBOL_TRAIN": "",
    "SOBOL_VAL": "",
    "SOBOL_TEST": "",
    "SOBOL_SKIP": "1",
    "TRAIN_CSV": "",
    "VAL_CSV": "",
    "TEST_CSV": "",
    "DATA_CSV": "",
    "SPLIT_TRAIN": "",
    "SPLIT_VAL": "",
    "SPLIT_TEST": "",
    # outputs
    "MODEL_PATH": "model.json",
    "REPORT_PATH": "reports.json",
    "LOG_DIR": "logs",
}

SOBOL = "sobol"
CSV = "csv"
SPLIT = "split"

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _int(values: Mapping[str, str], key: str) -> int:
    try:
        return int(values[key])
    except ValueError:
        raise ValueError(f"{key} must be an integer, got {values[key]!r}") from None


def _float(values: Mapping[str, str], key: str) -> float:
    try:
        return float(values[key])
    except ValueError:
        raise ValueError(f"{key} must be a number, got {values[key]!r}") from None


def _optional_float(values: Mapping[str, str], key: str) -> Optional[float]:
    return _float(values, key) if values[key] else None


def _bool(values: Mapping[str, str], key: str) -> bool:
    raw = values[key].lower()
    if raw in _TRUE:
        return True
    if raw in _FALSE:
        return False
    raise ValueError(f"{key} must be true or false, got {values[key]!r}")


def _int_list(values: Mapping[str, str], key: str) -> tuple[int, ...]:
    raw = values[key]
    if not raw:
        return ()
    try:
        return tuple(int(part) for part in raw.split(",") if part.strip())
    except ValueError:
        raise ValueError(f"{key} must be a comma-separated list of integers, got {raw!r}") from None


@dataclass(frozen=True)
class DataSourceConfig:
    """Where the experimental design comes from."""
    kind: str
    sobol: Optional[SobolSpec] = None
    train_csv: Optional[Path] = None
    val_csv: Optional[Path] = None
    test_csv: Optional[Path] = None
    data_csv: Optional[Path] = None
    split: Optional[tuple[int, int, int]] = None


@dataclass(frozen=True)
class OutputConfig:
    """Output locations."""
    model_path: Path = Path("model.json")
    report_path: Path = Path("reports.json")
    log_dir: Optional[str] = "logs"


@dataclass(frozen=True)
class ExperimentConfig:
    """Main configuration container."""
    pipeline: PipelineConfig
    data: DataSourceConfig
    output: OutputConfig
    # effective key/value mapping (defaults filled in) the other fields were built from
    values: dict = field(default_factory=dict, compare=False)
    base_dir: Path = Path(".")

    @property
    def seed(self) -> int:
        return self.pipeline.seed

    @classmethod
    def from_file(cls, path: "str | Path") -> "ExperimentConfig":
        """
        Load configuration from a dotenv-style KEY=value file.

        Relative paths inside the file are resolved against the file's directory.

        Raises:
            ValueError: missing file, unknown keys or invalid values
        """
        path = Path(path)
        if not path.is_file():
            raise ValueError(f"Config file not found: {path}")
        raw = dotenv_values(path)
        return cls.from_mapping({k: ("" if v is None else v) for k, v in raw.items()}, path.parent)

    @classmethod
    def from_mapping(cls, raw: Mapping[str, str], base_dir: "str | Path" = ".") -> "ExperimentConfig":
        """Build the configuration from a key/value mapping, defaults filled in."""
        unknown = sorted(set(raw) - set(DEFAULTS))
        if unknown:
            raise ValueError(f"Unknown configuration keys: {', '.join(unknown)}")

        values = dict(DEFAULTS)
        values.update({k: str(v).strip() for k, v in raw.items()})
        base_dir = Path(base_dir)

        return cls(
            pipeline=_pipeline_config(values),
            data=_data_source(values, base_dir),
            output=OutputConfig(
                model_path=_resolve(base_dir, values["MODEL_PATH"]),
                report_path=_resolve(base_dir, values["REPORT_PATH"]),
                log_dir=values["LOG_DIR"] or None,
            ),
            values=values,
            base_dir=base_dir,
        )

    def with_seed(self, seed: int) -> "ExperimentConfig":
        """Copy of this configuration with SEED replaced."""
        values = dict(self.values)
        values["SEED"] = str(int(seed))
        pipeline = replace(self.pipeline, seed=int(seed), pso=replace(self.pipeline.pso, seed=int(seed)))
        return replace(self, pipeline=pipeline, values=values)

    def config_hash(self) -> str:
        """sha256 over the sorted effective key/value mapping."""
        canonical = "\n".join(f"{key}={self.values[key]}" for key in sorted(self.values))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _resolve(base_dir: Path, value: str) -> Optional[Path]:
    if not value:
        return None
    path = Path(value)
    return path if path.is_absolute() else base_dir / path


_PSO_CONSTANTS = {
    "inertia": "PSO_INERTIA",
    "c_cognitive": "PSO_C_COGNITIVE",
    "c_social": "PSO_C_SOCIAL",
    "xi1": "PSO_XI1",
    "xi2": "PSO_XI2",
}


def pso_config(values: Mapping[str, str]) -> PsoConfig:
    """Swarm settings: PSO_PRESET constants, each overridable by its own key."""
    preset_name = values["PSO_PRESET"].strip().lower()
    if preset_name not in PRESETS:
        raise ValueError(f"PSO_PRESET must be one of {sorted(PRESETS)}, got {values['PSO_PRESET']!r}")
    constants = dict(PRESETS[preset_name])
    for name, key in _PSO_CONSTANTS.items():
        value = _optional_float(values, key)
        if value is not None:
            constants[name] = value
    return PsoConfig(
        n_particles=_int(values, "N_PARTICLES"),
        **constants,
        n_iterations=_int(values, "N_ITERATIONS"),
        bounds=(THETA_MIN, THETA_MAX),
        init_bounds=(_float(values, "THETA_INIT_LOW"), _float(values, "THETA_INIT_HIGH")),
        seed=_int(values, "SEED"),
    )


def _pipeline_config(values: Mapping[str, str]) -> PipelineConfig:
    grid_features = _int_list(values, "GRID_N_FEATURES")
    grid_orders = _int_list(values, "GRID_SPARSITY_ORDER")
    grid = ()
    if grid_features or grid_orders:
        grid = tuple(product(
            grid_features or (_int(values, "N_FEATURES"),),
            grid_orders or (_int(values, "SPARSITY_ORDER"),),
        ))

    return PipelineConfig(
        dims=_int_list(values, "DIMS"),
        n_features=_int(values, "N_FEATURES"),
        q=_int(values, "SPARSITY_ORDER"),
        sigma=_float(values, "SIGMA"),
        basis=BasisKind.parse(values["BASIS"]),
        eta=_optional_float(values, "ETA"),
        lambda_ridge=_optional_float(values, "LAMBDA_RIDGE"),
        lambda_lasso=_optional_float(values, "LAMBDA_LASSO"),
        lambda_ratio=_float(values, "LAMBDA_RATIO"),
        tol=_float(values, "TOL"),
        max_iter=_int(values, "MAX_ITER"),
        fit_intercept=_bool(values, "FIT_INTERCEPT"),
        standardize=_bool(values, "STANDARDIZE"),
        center_kernel=_bool(values, "CENTER_KERNEL"),
        scale_latent=_bool(values, "SCALE_LATENT"),
        pso=pso_config(values),
        n_workers=_int(values, "N_WORKERS"),
        seed=_int(values, "SEED"),
        grid=grid,
    )


def sobol_spec(values: Mapping[str, str]) -> SobolSpec:
    dim = _int(values, "SOBOL_DIM")
    u_raw = values["SOBOL_U"]
    if u_raw.lower() == "paper":
        u = paper_u(dim)
    else:
        try:
            u = [float(part) for part in u_raw.split(",")]
        except ValueError:
            raise ValueError(f"SOBOL_U must be 'paper' or a comma-separated list, got {u_raw!r}") from None
    return SobolSpec(
        dim=dim,
        u=u,
        n_train=_int(values, "SOBOL_TRAIN"),
        n_val=_int(values, "SOBOL_VAL"),
        n_test=_int(values, "SOBOL_TEST"),
        skip=_int(values, "SOBOL_SKIP"),
    )


def _data_source(values: Mapping[str, str], base_dir: Path) -> DataSourceConfig:
    sources = []
    if values["SOBOL_DIM"]:
        sources.append(SOBOL)
    if values["TRAIN_CSV"] or values["VAL_CSV"]:
        sources.append(CSV)
    if values["DATA_CSV"]:
        sources.append(SPLIT)
    if len(sources) != 1:
        raise ValueError(
            "Configure exactly one data source: SOBOL_DIM, TRAIN_CSV/VAL_CSV or DATA_CSV "
            f"(found {sources or 'none'})"
        )

    kind = sources[0]
    if kind == SOBOL:
        return DataSourceConfig(kind=SOBOL, sobol=sobol_spec(values))

    if kind == CSV:
        if not (values["TRAIN_CSV"] and values["VAL_CSV"]):
            raise ValueError("TRAIN_CSV and VAL_CSV must both be set")
        return DataSourceConfig(
            kind=CSV,
            train_csv=_resolve(base_dir, values["TRAIN_CSV"]),
            val_csv=_resolve(base_dir, values["VAL_CSV"]),
            test_csv=_resolve(base_dir, values["TEST_CSV"]),
        )

    missing = [key for key in ("SPLIT_TRAIN", "SPLIT_VAL", "SPLIT_TEST") if not values[key]]
    if missing:
        raise ValueError(f"DATA_CSV needs {', '.join(missing)}")
    return DataSourceConfig(
        kind=SPLIT,
        data_csv=_resolve(base_dir, values["DATA_CSV"]),
        split=(_int(values, "SPLIT_TRAIN"), _int(values, "SPLIT_VAL"), _int(values, "SPLIT_TEST")),
    )
