"""Tests for the structured logger."""
import logging

import pytest

from utils.logger import SurrogateLogger


@pytest.fixture
def logger():
    """Create a console-only logger."""
    instance = SurrogateLogger(log_dir=None, level=logging.DEBUG)
    yield instance
    instance.close()


def test_iteration_event_format(logger, caplog):
    """Test iteration events use the Key=value layout."""
    with caplog.at_level(logging.INFO, logger="surrogate"):
        logger.log_iteration(4, 2, 0.0123, "ridge", n_failed=1)
    assert "ITERATION K=4 | Iter=2 | Phase=ridge | GBest=0.0123 | Failed=1" in caplog.text


def test_dimension_complete_without_switch(logger, caplog):
    """Test a missing switch iteration is logged as none."""
    with caplog.at_level(logging.INFO, logger="surrogate"):
        logger.log_dimension_complete(6, 0.5, None, 30, 120)
    assert "DIM_COMPLETE K=6 | ValError=0.5 | Switch=none | Iterations=30 | NNZ=120" in caplog.text


def test_failures_logged_at_warning_and_error(logger, caplog):
    """Test particle failures warn and dimension failures are errors."""
    with caplog.at_level(logging.DEBUG, logger="surrogate"):
        logger.log_particle_failure(2, 0, 3, "DegenerateKernel: flat")
        logger.log_dimension_failed(2, "every particle failed")
    levels = [r.levelno for r in caplog.records]
    assert levels == [logging.WARNING, logging.ERROR]


def test_file_handler_created(tmp_path):
    """Test a log directory receives a dated log file."""
    instance = SurrogateLogger(log_dir=str(tmp_path / "logs"))
    instance.log_selection(8, 0.006, 10000, 2)
    instance.close()
    files = list((tmp_path / "logs").glob("surrogate_*.log"))
    assert len(files) == 1
    assert "SELECTED K=8" in files[0].read_text(encoding="utf-8")


def test_handlers_not_duplicated():
    """Test creating the logger twice keeps one console handler."""
    first = SurrogateLogger(log_dir=None)
    second = SurrogateLogger(log_dir=None)
    assert len(second.logger.handlers) == 1
    first.close()
    second.close()
