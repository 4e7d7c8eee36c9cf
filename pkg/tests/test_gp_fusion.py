import numpy as np
import pytest
from scipy.linalg import LinAlgError

import fusion.gp_fusion as gp_fusion
from fusion.gp_fusion import INITIAL_JITTER, fuse_frame, fuse_patch, gp_posterior, patch_origins
from fusion.kernels import gram_matrix
from models.errors import DimensionMismatch, EmptyMap, RangeError, SingularKernel
from models.maps import UNKNOWN_DEPTH, GreyImage, SparseDepthMap
from models.params import GpParams


def dense_oracle(train, values, query, image, params):
    """Media y varianza posteriores por inversión directa."""
    scale = params.signal_scale
    covariance = (scale * gram_matrix(train, train, image, params)
                  + (params.noise_variance + INITIAL_JITTER * scale) * np.eye(len(train)))
    cross = scale * gram_matrix(train, query, image, params)
    inverse = np.linalg.inv(covariance)
    mean = values.mean()
    means = mean + cross.T @ inverse @ (values - mean)
    variances = scale - np.einsum("ij,ik,kj->j", cross, inverse, cross)
    return means, np.clip(variances, 0.0, scale)


def test_posterior_matches_dense_inversion(gp_params, rng):
    image = GreyImage(rng.uniform(0.0, 1.0, (32, 32)))
    flat = rng.choice(32 * 32, 30, replace=False)
    pixels = np.column_stack(np.unravel_index(flat, (32, 32)))
    train, query = pixels[:12], pixels[12:]
    values = rng.uniform(1.0, 20.0, 12)
    means, variances = gp_posterior(train, values, query, image, gp_params)
    expected_means, expected_variances = dense_oracle(train, values, query, image, gp_params)
    np.testing.assert_allclose(means, expected_means, rtol=1e-8, atol=1e-9)
    np.testing.assert_allclose(variances, expected_variances, rtol=1e-8, atol=1e-9)


def test_posterior_variance_is_bounded(gp_params, rng):
    image = GreyImage(rng.uniform(0.0, 1.0, (16, 16)))
    train = np.array([[2, 2], [8, 8], [12, 3]])
    query = np.argwhere(np.ones((16, 16), dtype=bool))
    _, variances = gp_posterior(train, np.array([3.0, 4.0, 5.0]), query, image, gp_params)
    assert np.all(variances >= 0.0)
    assert np.all(variances <= gp_params.signal_scale)


def test_posterior_constant_data_gives_constant_mean(gp_params, rng):
    image = GreyImage(rng.uniform(0.0, 1.0, (16, 16)))
    train = np.array([[0, 0], [5, 9], [15, 15], [9, 2]])
    query = np.argwhere(np.ones((16, 16), dtype=bool))
    means, _ = gp_posterior(train, np.full(4, 6.5), query, image, gp_params)
    np.testing.assert_allclose(means, 6.5, rtol=0, atol=1e-12)


def test_posterior_requires_training_data(gp_params):
    image = GreyImage(np.zeros((4, 4)))
    with pytest.raises(RangeError):
        gp_posterior(np.empty((0, 2)), np.empty(0), np.array([[0, 0]]), image, gp_params)


def test_singular_kernel_names_the_patch(gp_params, monkeypatch):
    def failing_cholesky(*args, **kwargs):
        raise LinAlgError("no definida positiva")

    monkeypatch.setattr(gp_fusion, "cholesky", failing_cholesky)
    image = GreyImage(np.zeros((4, 4)))
    with pytest.raises(SingularKernel, match="parche 7") as info:
        gp_posterior(np.array([[0, 0]]), np.array([1.0]), np.array([[1, 1]]), image,
                     gp_params, patch_index=7)
    assert info.value.patch_index == 7
    assert info.value.exit_code == 3


def test_patch_with_too_few_points_stays_unknown(gp_params):
    depth = np.full((8, 8), UNKNOWN_DEPTH)
    depth[2, 2] = 4.0
    means, variances, known = fuse_patch(SparseDepthMap(depth), GreyImage(np.zeros((8, 8))),
                                         gp_params)
    assert not known.any()
    assert np.all(means == UNKNOWN_DEPTH)
    assert np.all(variances == gp_params.signal_scale)


def test_patch_keeps_training_values(gp_params, rng):
    depth = np.full((16, 16), UNKNOWN_DEPTH)
    depth[::4, ::3] = rng.uniform(2.0, 9.0, depth[::4, ::3].shape)
    sparse = SparseDepthMap(depth)
    means, variances, known = fuse_patch(sparse, GreyImage(rng.uniform(0, 1, (16, 16))), gp_params)
    assert known.all()
    assert np.array_equal(means[sparse.filled], depth[sparse.filled])
    assert np.median(variances[sparse.filled]) < np.median(variances[~sparse.filled])


def test_patch_origins_cover_the_axis():
    assert patch_origins(100, 32, 24) == [0, 24, 48, 68]
    assert patch_origins(72, 32, 24) == [0, 24, 40]
    assert patch_origins(20, 32, 24) == [0]


def _striped_frame(value=7.0, shape=(64, 96)):
    depth = np.full(shape, UNKNOWN_DEPTH)
    depth[::4, :] = value
    return SparseDepthMap(depth), GreyImage(np.full(shape, 0.5))


def test_fuse_frame_fills_constant_scene(gp_params):
    sparse, grey = _striped_frame()
    dense, uncertainty = fuse_frame(sparse, grey, gp_params)
    assert dense.known.all()
    np.testing.assert_allclose(dense.depth, 7.0, rtol=0, atol=1e-9)
    assert np.array_equal(dense.depth[sparse.filled], sparse.depth[sparse.filled])
    assert np.all(uncertainty.variance >= 0)


def test_fuse_frame_is_identical_across_thread_counts(rng):
    params = GpParams(patch_size=16, patch_overlap=4)
    depth = np.full((48, 64), UNKNOWN_DEPTH)
    depth[::3, ::2] = rng.uniform(2.0, 9.0, depth[::3, ::2].shape)
    sparse = SparseDepthMap(depth)
    grey = GreyImage(rng.uniform(0.0, 1.0, (48, 64)))
    single = fuse_frame(sparse, grey, params, threads=1)
    threaded = fuse_frame(sparse, grey, params, threads=4)
    assert np.array_equal(single[0].depth, threaded[0].depth)
    assert np.array_equal(single[1].variance, threaded[1].variance)


def test_fuse_frame_marks_unsupported_regions_unknown():
    params = GpParams(patch_size=16, patch_overlap=0)
    depth = np.full((32, 32), UNKNOWN_DEPTH)
    depth[0:16:2, 0:16:2] = 3.0
    dense, uncertainty = fuse_frame(SparseDepthMap(depth), GreyImage(np.zeros((32, 32))), params)
    assert dense.known[:16, :16].all()
    assert not dense.known[16:, 16:].any()
    assert np.all(dense.depth[16:, 16:] == UNKNOWN_DEPTH)
    assert np.all(uncertainty.variance[16:, 16:] == params.signal_scale)


def test_fuse_frame_rejects_bad_inputs(gp_params):
    sparse, grey = _striped_frame()
    with pytest.raises(DimensionMismatch):
        fuse_frame(sparse, GreyImage(np.zeros((10, 10))), gp_params)
    with pytest.raises(EmptyMap):
        fuse_frame(SparseDepthMap.empty(64, 96), grey, gp_params)
    with pytest.raises(RangeError):
        fuse_frame(sparse, grey, gp_params, threads=0)


def test_posterior_does_not_depend_on_training_order(gp_params, rng):
    image = GreyImage(rng.uniform(0.0, 1.0, (32, 32)))
    flat = rng.choice(32 * 32, 40, replace=False)
    pixels = np.column_stack(np.unravel_index(flat, (32, 32)))
    train, query = pixels[:15], pixels[15:]
    values = rng.uniform(1.0, 20.0, 15)
    order = rng.permutation(15)
    means, variances = gp_posterior(train, values, query, image, gp_params)
    shuffled_means, shuffled_variances = gp_posterior(train[order], values[order], query,
                                                      image, gp_params)
    np.testing.assert_allclose(shuffled_means, means, rtol=1e-9, atol=1e-10)
    np.testing.assert_allclose(shuffled_variances, variances, rtol=1e-9, atol=1e-10)


def _overshooting_patch():
    # Dos píxeles vecinos con la misma intensidad y profundidades muy distintas
    depth = np.full((16, 16), UNKNOWN_DEPTH)
    depth[8, 7] = 1.0
    depth[8, 8] = 30.0
    return SparseDepthMap(depth), GreyImage(np.full((16, 16), 0.5))


def test_patch_rejects_means_outside_the_data_range():
    params = GpParams(min_train_points=2)
    sparse, grey = _overshooting_patch()
    raw_means, _ = gp_posterior(np.array([[8, 7], [8, 8]]), np.array([1.0, 30.0]),
                                np.array([[8, 6], [8, 9]]), grey, params)
    assert raw_means[0] < 0 and raw_means[1] > 30.0 + 0.5 * 29.0

    means, variances, known = fuse_patch(sparse, grey, params)
    assert not known[8, 6] and not known[8, 9]
    assert means[8, 6] == UNKNOWN_DEPTH and means[8, 9] == UNKNOWN_DEPTH
    assert variances[8, 6] == params.signal_scale
    assert known[sparse.filled].all()
    assert np.all(means[known] > 0)
    assert np.all(means[known] <= 30.0 + 0.5 * 29.0)


def test_fused_known_pixels_have_positive_depth():
    params = GpParams(patch_size=16, patch_overlap=0, min_train_points=2)
    sparse, grey = _overshooting_patch()
    dense, uncertainty = fuse_frame(sparse, grey, params)
    assert dense.known.any() and not dense.known.all()
    assert np.all(dense.depth[dense.known] > 0)
    assert np.all(dense.depth[~dense.known] == UNKNOWN_DEPTH)
    assert np.all(uncertainty.variance[~dense.known] == params.signal_scale)
