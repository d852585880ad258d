"""Tests for sparse random feature weights and expansions."""
import numpy as np
import pytest

from core.errors import DimensionMismatch
from features.random_features import (
    BasisKind,
    FeatureWeights,
    RandomFeatureModel,
    draw_feature_weights,
    evaluate_expansion,
    feature_matrix,
)


def test_weights_have_exactly_q_nonzeros():
    """Test every weight vector is q-sparse."""
    weights = draw_feature_weights(dim=6, q=2, R=200, seed=1)
    assert weights.weights.shape == (200, 6)
    assert np.all(np.count_nonzero(weights.weights, axis=1) == 2)
    assert np.all(np.diff(weights.supports, axis=1) > 0)


def test_q_larger_than_dim_is_clamped():
    """Test q > dim gives dense weights."""
    weights = draw_feature_weights(dim=2, q=5, R=10, seed=0)
    assert weights.supports.shape == (10, 2)
    assert np.all(np.count_nonzero(weights.weights, axis=1) == 2)


def test_draw_is_deterministic():
    """Test same seed gives same weights."""
    a = draw_feature_weights(dim=5, q=2, R=50, sigma=0.5, seed=11)
    b = draw_feature_weights(dim=5, q=2, R=50, sigma=0.5, seed=11)
    np.testing.assert_array_equal(a.weights, b.weights)


def test_supports_cover_all_pairs():
    """Test supports are spread over every coordinate pair."""
    weights = draw_feature_weights(dim=4, q=2, R=3000, seed=2)
    pairs = {tuple(s) for s in weights.supports.tolist()}
    assert len(pairs) == 6


def test_cos_feature_hand_case():
    """Test the cos basis at a hand-computed point."""
    weights = FeatureWeights(dim=2, q=1, supports=[[0], [1]], values=[[np.pi], [0.5]], sigma=1.0, seed=None)
    A = feature_matrix([[1.0, 2.0]], weights, BasisKind.COS)
    np.testing.assert_allclose(A, [[np.cos(np.pi), np.cos(1.0)]], atol=1e-15)


def test_relu_and_sin_bases():
    """Test the other bases apply elementwise."""
    t = np.array([-1.0, 0.0, 2.0])
    np.testing.assert_array_equal(BasisKind.RELU.apply(t), [0.0, 0.0, 2.0])
    np.testing.assert_allclose(BasisKind.SIN.apply(t), np.sin(t))
    assert BasisKind.parse("Cos") is BasisKind.COS


def test_unknown_basis_rejected():
    """Test unknown basis names raise ValueError."""
    with pytest.raises(ValueError, match="Unknown basis"):
        BasisKind.parse("tanh")


def test_feature_matrix_dimension_mismatch():
    """Test points of the wrong dimension are rejected."""
    weights = draw_feature_weights(dim=3, q=2, R=5)
    with pytest.raises(DimensionMismatch):
        feature_matrix(np.zeros((4, 2)), weights, "cos")


def test_evaluate_expansion_matches_matrix_product():
    """Test expansion equals intercept plus feature matrix times coefficients."""
    rng = np.random.default_rng(0)
    weights = draw_feature_weights(dim=3, q=2, R=20, seed=4)
    coefficients = rng.normal(size=20)
    model = RandomFeatureModel("cos", weights, coefficients, intercept=1.5)
    x = rng.random((7, 3))

    expected = np.cos(x @ weights.weights.T) @ coefficients + 1.5
    np.testing.assert_allclose(evaluate_expansion(model, x), expected, rtol=1e-13)


def test_rescaled_weights_equal_scaled_inputs():
    """Test dividing weights by scales equals dividing inputs by scales."""
    rng = np.random.default_rng(5)
    weights = draw_feature_weights(dim=3, q=2, R=30, seed=5)
    scales = np.array([0.5, 2.0, 4.0])
    x = rng.random((6, 3))

    np.testing.assert_allclose(
        feature_matrix(x, weights.rescaled(scales), "cos"),
        feature_matrix(x / scales, weights, "cos"),
        rtol=1e-12,
    )


def test_model_rejects_wrong_coefficient_count():
    """Test coefficient count must match feature count."""
    weights = draw_feature_weights(dim=2, q=1, R=4)
    with pytest.raises(ValueError):
        RandomFeatureModel("cos", weights, np.zeros(3))


def test_nonzero_entries_have_unit_variance():
    """Test 50000 two-sparse weights have nonzero entries with variance near sigma^2 = 1."""
    weights = draw_feature_weights(dim=8, q=2, R=50_000, sigma=1.0, seed=6)
    values = np.asarray(weights.values).ravel()
    assert values.size == 100_000
    assert 0.97 <= values.var() <= 1.03


def test_entries_ignore_off_support_coordinates():
    """Test perturbing coordinates outside a feature's support leaves its column unchanged."""
    rng = np.random.default_rng(3)
    weights = draw_feature_weights(dim=6, q=2, R=40, seed=9)
    x = rng.random((5, 6))
    A = feature_matrix(x, weights, "cos")

    for j, support in enumerate(weights.supports):
        off_support = np.ones(6, dtype=bool)
        off_support[support] = False
        perturbed = x + off_support * rng.normal(size=x.shape)
        np.testing.assert_array_equal(feature_matrix(perturbed, weights, "cos")[:, j], A[:, j])


@pytest.mark.parametrize("basis", [BasisKind.COS, BasisKind.SIN])
def test_trigonometric_entries_are_bounded(basis):
    """Test cos and sin features stay in [-1, 1] for large inputs."""
    weights = draw_feature_weights(dim=4, q=2, R=300, sigma=3.0, seed=2)
    x = np.random.default_rng(8).normal(scale=50.0, size=(100, 4))
    A = feature_matrix(x, weights, basis)
    assert np.all(np.abs(A) <= 1.0)


def test_zero_coefficients_predict_the_intercept():
    """Test an expansion with zero coefficients is the constant intercept."""
    weights = draw_feature_weights(dim=3, q=2, R=25, seed=1)
    model = RandomFeatureModel("cos", weights, np.zeros(25), intercept=3.0)
    x = np.random.default_rng(4).normal(size=(10, 3))
    np.testing.assert_array_equal(evaluate_expansion(model, x), np.full(10, 3.0))
