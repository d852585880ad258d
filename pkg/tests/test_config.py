"""Tests for configuration management."""
from pathlib import Path

import pytest

from config import CSV, DEFAULTS, SOBOL, SPLIT, ExperimentConfig
from features.random_features import BasisKind


def _write_config(tmp_path, text):
    path = tmp_path / "experiment.env"
    path.write_text(text, encoding="utf-8")
    return path


def test_config_from_file_complete(tmp_path):
    """Test loading a complete Sobol configuration."""
    path = _write_config(
        tmp_path,
        "SEED=7\n"
        "DIMS=4,6,8,10\n"
        "N_FEATURES=2000\n"
        "SPARSITY_ORDER=2\n"
        "BASIS=cos\n"
        "ETA=0.05\n"
        "N_PARTICLES=10\n"
        "N_ITERATIONS=30\n"
        "SOBOL_DIM=20\n"
        "SOBOL_TRAIN=800\n"
        "SOBOL_VAL=1200\n"
        "SOBOL_TEST=2000\n",
    )
    config = ExperimentConfig.from_file(path)

    assert config.seed == 7
    assert config.pipeline.dims == (4, 6, 8, 10)
    assert config.pipeline.basis is BasisKind.COS
    assert config.pipeline.eta == 0.05
    assert config.pipeline.n_iterations == 30
    assert config.pipeline.pso.n_particles == 10
    assert config.data.kind == SOBOL
    assert config.data.sobol.n_total == 4000
    assert config.data.sobol.u[6] == 500.0
    assert config.output.model_path == tmp_path / "model.json"


def test_defaults_apply(tmp_path):
    """Test unset keys fall back to documented defaults."""
    config = ExperimentConfig.from_mapping({"SOBOL_DIM": "8", "SOBOL_TRAIN": "5", "SOBOL_VAL": "5", "SOBOL_TEST": "5"})
    assert config.pipeline.dims == (2, 4, 6, 8)
    assert config.pipeline.eta is None
    assert config.pipeline.lambda_lasso is None
    assert config.pipeline.scale_latent is True
    assert config.pipeline.pso.init_bounds == (0.0, 1.0)
    assert (config.pipeline.pso.inertia, config.pipeline.pso.c_cognitive, config.pipeline.pso.c_social) == (0.7, 1.0, 1.0)
    assert config.output.log_dir == "logs"


def test_pso_preset_and_overrides():
    """Test PSO_PRESET selects the swarm constants and single keys override them."""
    base = {"SOBOL_DIM": "8", "SOBOL_TRAIN": "5", "SOBOL_VAL": "5", "SOBOL_TEST": "5"}
    pso = ExperimentConfig.from_mapping({**base, "PSO_PRESET": "constriction"}).pipeline.pso
    assert (pso.inertia, pso.c_cognitive, pso.c_social) == (0.7298, 0.74809, 0.74809)

    pso = ExperimentConfig.from_mapping({**base, "PSO_PRESET": "Constriction", "PSO_INERTIA": "0.5"}).pipeline.pso
    assert pso.inertia == 0.5
    assert pso.c_social == 0.74809

    with pytest.raises(ValueError, match="PSO_PRESET"):
        ExperimentConfig.from_mapping({**base, "PSO_PRESET": "fast"})


def test_unknown_keys_rejected(tmp_path):
    """Test unknown keys raise ValueError naming them."""
    path = _write_config(tmp_path, "SOBOL_DIM=8\nN_FEATURS=10\n")
    with pytest.raises(ValueError, match="N_FEATURS"):
        ExperimentConfig.from_file(path)


def test_invalid_values_rejected():
    """Test malformed numbers and booleans raise ValueError."""
    base = {"SOBOL_DIM": "8", "SOBOL_TRAIN": "5", "SOBOL_VAL": "5", "SOBOL_TEST": "5"}
    with pytest.raises(ValueError, match="N_FEATURES"):
        ExperimentConfig.from_mapping({**base, "N_FEATURES": "many"})
    with pytest.raises(ValueError, match="STANDARDIZE"):
        ExperimentConfig.from_mapping({**base, "STANDARDIZE": "maybe"})
    with pytest.raises(ValueError):
        ExperimentConfig.from_mapping({**base, "DIMS": "6,4"})


def test_exactly_one_data_source():
    """Test zero or several data sources are rejected."""
    with pytest.raises(ValueError, match="exactly one data source"):
        ExperimentConfig.from_mapping({})
    with pytest.raises(ValueError, match="exactly one data source"):
        ExperimentConfig.from_mapping({"SOBOL_DIM": "8", "DATA_CSV": "d.csv"})


def test_csv_source_paths_resolve_against_config_dir(tmp_path):
    """Test relative CSV paths are taken relative to the config file."""
    path = _write_config(tmp_path, "TRAIN_CSV=train.csv\nVAL_CSV=val.csv\n")
    config = ExperimentConfig.from_file(path)
    assert config.data.kind == CSV
    assert config.data.train_csv == tmp_path / "train.csv"
    assert config.data.test_csv is None


def test_split_source_needs_counts():
    """Test DATA_CSV requires all three split counts."""
    with pytest.raises(ValueError, match="SPLIT_TEST"):
        ExperimentConfig.from_mapping({"DATA_CSV": "d.csv", "SPLIT_TRAIN": "3", "SPLIT_VAL": "2"})
    config = ExperimentConfig.from_mapping(
        {"DATA_CSV": "/data/d.csv", "SPLIT_TRAIN": "3", "SPLIT_VAL": "2", "SPLIT_TEST": "1"}
    )
    assert config.data.kind == SPLIT
    assert config.data.split == (3, 2, 1)
    assert config.data.data_csv == Path("/data/d.csv")


def test_grid_is_cartesian_product():
    """Test grid lists expand into every (R, q) pair."""
    config = ExperimentConfig.from_mapping(
        {"SOBOL_DIM": "8", "SOBOL_TRAIN": "5", "SOBOL_VAL": "5", "SOBOL_TEST": "5",
         "GRID_N_FEATURES": "500,1000", "GRID_SPARSITY_ORDER": "1,2"}
    )
    assert config.pipeline.grid == ((500, 1), (500, 2), (1000, 1), (1000, 2))


def test_seed_override_changes_hash():
    """Test with_seed replaces the seed everywhere and changes the config hash."""
    config = ExperimentConfig.from_mapping({"SOBOL_DIM": "8", "SOBOL_TRAIN": "5", "SOBOL_VAL": "5", "SOBOL_TEST": "5"})
    overridden = config.with_seed(11)

    assert overridden.seed == 11
    assert overridden.pipeline.pso.seed == 11
    assert overridden.values["SEED"] == "11"
    assert overridden.config_hash() != config.config_hash()
    assert config.with_seed(0).config_hash() == config.config_hash()


def test_config_hash_ignores_key_order():
    """Test the hash depends on content only."""
    a = ExperimentConfig.from_mapping({"SOBOL_DIM": "8", "SOBOL_TRAIN": "5", "SOBOL_VAL": "5", "SOBOL_TEST": "5"})
    b = ExperimentConfig.from_mapping({"SOBOL_TEST": "5", "SOBOL_VAL": "5", "SOBOL_TRAIN": "5", "SOBOL_DIM": "8"})
    assert a.config_hash() == b.config_hash()
    assert len(a.config_hash()) == 64


def test_every_default_documented():
    """Test the example config lists every accepted key."""
    example = Path(__file__).resolve().parent.parent / "experiment.env.example"
    text = example.read_text(encoding="utf-8")
    for key in DEFAULTS:
        assert f"\n{key}=" in text


def test_missing_file():
    """Test a missing config file raises ValueError."""
    with pytest.raises(ValueError, match="not found"):
        ExperimentConfig.from_file("/nonexistent/experiment.env")
