"""Tests for datasets, splits and the relative error."""
import numpy as np
import pytest

from core.dataset import Dataset, split_dataset
from core.errors import (
    DataError,
    InsufficientData,
    LengthMismatch,
    NonFiniteInput,
    ZeroVariance,
)
from core.metrics import relative_error


@pytest.fixture
def six_points():
    """Create a dataset with six one-dimensional points."""
    points = np.arange(6, dtype=float).reshape(-1, 1)
    return Dataset(points, points[:, 0] * 10.0)


def test_relative_error_perfect_prediction():
    """Test perfect prediction gives zero error."""
    report = relative_error([1, 2, 3], [1, 2, 3])
    assert report.error == 0.0
    assert report.n_points == 3
    assert report.sample_mean == 2.0


def test_relative_error_mean_prediction_is_one():
    """Test predicting the sample mean gives error one."""
    assert relative_error([1, 2, 3], [2, 2, 2]).error == 1.0


def test_relative_error_hand_case():
    """Test numerator 1 over denominator 2."""
    assert relative_error([1, 2, 3], [1, 2, 4]).error == 0.5


def test_relative_error_identities_on_random_data():
    """Test the identities hold for arbitrary responses."""
    y = np.random.default_rng(3).normal(size=50)
    assert relative_error(y, y).error == 0.0
    assert relative_error(y, np.full_like(y, y.mean())).error == pytest.approx(1.0, abs=1e-15)


def test_relative_error_zero_variance():
    """Test constant responses are rejected."""
    with pytest.raises(ZeroVariance):
        relative_error([4, 4, 4], [1, 2, 3])


def test_relative_error_length_mismatch():
    """Test different lengths are rejected."""
    with pytest.raises(LengthMismatch):
        relative_error([1, 2, 3], [1, 2])


def test_domain_errors_are_value_errors():
    """Test the error hierarchy stays catchable as ValueError."""
    assert issubclass(ZeroVariance, DataError)
    assert issubclass(DataError, ValueError)


def test_dataset_rejects_non_finite():
    """Test NaN entries are rejected."""
    with pytest.raises(NonFiniteInput):
        Dataset([[0.0], [np.nan]], [1.0, 2.0])


def test_dataset_rejects_length_mismatch():
    """Test points and responses must pair up."""
    with pytest.raises(LengthMismatch):
        Dataset([[0.0], [1.0]], [1.0])


def test_dataset_is_read_only(six_points):
    """Test stored arrays cannot be modified."""
    with pytest.raises(ValueError):
        six_points.points[0, 0] = 5.0


def test_split_partition(six_points):
    """Test split parts are disjoint and cover the requested counts."""
    split = split_dataset(six_points, 2, 2, 2, seed=0)
    idx = [set(split.indices[name].tolist()) for name in ("train", "validation", "test")]

    assert all(len(s) == 2 for s in idx)
    assert idx[0].isdisjoint(idx[1]) and idx[0].isdisjoint(idx[2]) and idx[1].isdisjoint(idx[2])
    assert set().union(*idx) == set(range(6))
    np.testing.assert_array_equal(split.train.points, six_points.points[split.indices["train"]])


def test_split_is_deterministic(six_points):
    """Test same seed gives same split."""
    a = split_dataset(six_points, 2, 2, 2, seed=7)
    b = split_dataset(six_points, 2, 2, 2, seed=7)
    for name in ("train", "validation", "test"):
        np.testing.assert_array_equal(a.indices[name], b.indices[name])


def test_split_drops_leftovers(six_points):
    """Test leftover points are dropped."""
    split = split_dataset(six_points, 2, 1, 1, seed=0)
    assert split.train.n_points + split.validation.n_points + split.test.n_points == 4


def test_split_insufficient_data(six_points):
    """Test counts above the dataset size are rejected."""
    with pytest.raises(InsufficientData):
        split_dataset(six_points, 4, 2, 2, seed=0)
