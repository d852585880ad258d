"""Tests for kernel PCA with a nonisotropic Gaussian kernel."""
import numpy as np
import pytest

from core.errors import DegenerateKernel, DimensionMismatch, InsufficientData
from kpca.kernel_pca import (
    THETA_MAX,
    THETA_MIN,
    KernelParams,
    fit_kpca,
    gaussian_kernel,
    kernel_matrix,
    project,
)
from tests.oracles import dense_kpca_oracle


@pytest.fixture
def cloud():
    """Create 30 random points in the unit cube."""
    return np.random.default_rng(21).random((30, 3))


def _assert_axes_match(actual, expected, tol):
    for m in range(expected.shape[1]):
        sign = np.sign(expected[:, m] @ actual[:, m]) or 1.0
        np.testing.assert_allclose(actual[:, m], sign * expected[:, m], rtol=0, atol=tol)


def test_gaussian_kernel_hand_case():
    """Test the kernel against a direct evaluation."""
    params = KernelParams([1.0, 2.0])
    value = gaussian_kernel([0.0, 0.0], [1.0, 2.0], params)
    assert value == pytest.approx(np.exp(-0.5 * (1.0 + 1.0)))


def test_kernel_matrix_matches_pairwise_kernel(cloud):
    """Test the vectorized kernel matrix equals pairwise evaluations."""
    params = KernelParams([0.5, 1.0, 2.0])
    K = kernel_matrix(cloud[:5], cloud[5:9], params)
    for i in range(5):
        for j in range(4):
            assert K[i, j] == pytest.approx(gaussian_kernel(cloud[i], cloud[5 + j], params), rel=1e-12)


def test_theta_is_clamped():
    """Test bandwidths are clamped to the allowed range."""
    params = KernelParams([0.0, 1e9, 1.0])
    np.testing.assert_array_equal(params.theta, [THETA_MIN, THETA_MAX, 1.0])


def test_matches_dense_oracle_on_seeded_fixtures():
    """Test projections agree with the textbook construction up to sign."""
    for seed in range(20):
        rng = np.random.default_rng(100 + seed)
        n = int(rng.integers(10, 41))
        points = rng.random((n, 3))
        new_points = rng.random((5, 3))
        theta = rng.uniform(0.3, 1.5, size=3)
        k = 2

        model = fit_kpca(points, KernelParams(theta), k)
        expected, eigenvalues = dense_kpca_oracle(points, theta, k, new_points)

        np.testing.assert_allclose(model.eigenvalues, eigenvalues, rtol=1e-8)
        _assert_axes_match(project(model, new_points), expected, tol=1e-8)


def test_two_point_hand_solution():
    """Test two points project to +/- sqrt((1 - kappa) / 2)."""
    points = np.array([[0.0, 0.0], [1.0, 1.0]])
    params = KernelParams([1.0, 1.0])
    kappa = np.exp(-1.0)

    model = fit_kpca(points, params, 1)
    z = project(model, points)[:, 0]
    expected = np.sqrt((1.0 - kappa) / 2.0)

    assert model.eigenvalues[0] == pytest.approx(1.0 - kappa, rel=1e-12)
    np.testing.assert_allclose(z, [expected, -expected], rtol=1e-12)


def test_duplicated_points_are_degenerate():
    """Test identical points leave no eigenvalue above the floor."""
    with pytest.raises(DegenerateKernel):
        fit_kpca(np.ones((5, 2)), KernelParams([1.0, 1.0]), 1)


def test_fewer_axes_kept_with_warning(caplog):
    """Test only the axes above the floor are kept when k is too large."""
    points = np.array([[0.0], [0.0], [1.0], [1.0]])
    with caplog.at_level("WARNING"):
        model = fit_kpca(points, KernelParams([1.0]), 3)
    assert model.k == 1
    assert "kept 1 of 3" in caplog.text


def test_axes_are_normalized(cloud):
    """Test eigenvalue times squared coefficient norm is one."""
    model = fit_kpca(cloud, KernelParams([0.4, 0.8, 1.2]), 3)
    np.testing.assert_allclose(model.eigenvalues * np.sum(model.alphas ** 2, axis=0), 1.0, rtol=1e-10)
    assert np.all(np.diff(model.eigenvalues) <= 0)


def test_projection_of_training_points_matches_fit(cloud):
    """Test out-of-sample centering reproduces the in-sample coordinates."""
    model = fit_kpca(cloud, KernelParams([0.4, 0.8, 1.2]), 3)
    np.testing.assert_allclose(project(model, cloud), model.fitted_coordinates, atol=1e-10)
    np.testing.assert_allclose(model.fitted_coordinates.mean(axis=0), 0.0, atol=1e-10)


def test_sign_convention(cloud):
    """Test the largest-magnitude coefficient of each axis is positive."""
    model = fit_kpca(cloud, KernelParams([0.4, 0.8, 1.2]), 3)
    pivots = model.alphas[np.argmax(np.abs(model.alphas), axis=0), np.arange(model.k)]
    assert np.all(pivots > 0)


def test_uncentered_variant(cloud):
    """Test center=False decomposes the raw kernel matrix."""
    params = KernelParams([0.4, 0.8, 1.2])
    model = fit_kpca(cloud, params, 2, center=False)
    top = np.linalg.eigvalsh(kernel_matrix(cloud, cloud, params))[::-1][:2]
    np.testing.assert_allclose(model.eigenvalues, top, rtol=1e-10)
    np.testing.assert_allclose(project(model, cloud), model.fitted_coordinates, atol=1e-10)


def test_insufficient_points():
    """Test k above N and single-point fits are rejected."""
    with pytest.raises(InsufficientData):
        fit_kpca(np.zeros((1, 2)), KernelParams([1.0, 1.0]), 1)
    with pytest.raises(InsufficientData):
        fit_kpca(np.random.default_rng(0).random((3, 2)), KernelParams([1.0, 1.0]), 4)


def test_projection_dimension_mismatch(cloud):
    """Test projecting points of another dimension fails."""
    model = fit_kpca(cloud, KernelParams([1.0, 1.0, 1.0]), 2)
    with pytest.raises(DimensionMismatch):
        project(model, np.zeros((2, 4)))


def test_kernel_matrix_is_positive_semidefinite(cloud):
    """Test the kernel matrix is symmetric with no significantly negative eigenvalue."""
    K = kernel_matrix(cloud, cloud, KernelParams([0.3, 0.6, 0.9]))
    np.testing.assert_array_equal(K, K.T)
    eigenvalues = np.linalg.eigvalsh(K)
    assert eigenvalues.min() >= -1e-10 * eigenvalues.max()


def test_tiny_bandwidth_flattens_spectrum():
    """Test unit-separated points with theta at the lower clamp give equal eigenvalues."""
    points = np.arange(6, dtype=float)[:, None] * np.ones((1, 2))
    model = fit_kpca(points, KernelParams([1e-3, 1e-3]), 3)
    assert model.k == 3
    assert np.ptp(model.eigenvalues) <= 1e-6
    np.testing.assert_allclose(model.eigenvalues, 1.0, atol=1e-6)


@pytest.mark.parametrize("theta", [1e-3, 1e-2, 0.05])
def test_near_identity_kernel_on_large_sample(theta):
    """Test a large sample with small bandwidths keeps every requested axis."""
    points = np.random.default_rng(5).random((800, 20))
    model = fit_kpca(points, KernelParams(np.full(20, theta)), 4)
    assert model.k == 4
    assert np.ptp(model.eigenvalues) <= 1e-6
    assert np.all(np.isfinite(project(model, points[:10])))


def test_duplicated_points_project_identically(cloud):
    """Test repeated inputs map to exactly the same coordinates."""
    points = np.vstack([cloud, cloud[:1]])
    model = fit_kpca(points, KernelParams([0.5, 0.5, 0.5]), 2)
    z = project(model, np.vstack([cloud[0], cloud[0], points[-1]]))
    np.testing.assert_array_equal(z[0], z[1])
    np.testing.assert_array_equal(z[0], z[2])
