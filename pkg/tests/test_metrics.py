import numpy as np
import pytest

from evaluation.metrics import depth_rmse, mask_diff, mask_metrics
from models.errors import DimensionMismatch, EmptyValidSet
from models.maps import DenseDepthMap, FreeSpaceMask


def _mask(rows):
    return FreeSpaceMask(np.array(rows, dtype=np.uint8))


def test_two_by_two_confusion_case():
    pred = _mask([[255, 255], [0, 0]])
    gt = _mask([[255, 0], [0, 0]])
    metrics = mask_metrics(pred, gt)
    assert (metrics.accuracy, metrics.precision, metrics.true_positive_rate) == (0.75, 0.5, 1.0)
    assert metrics.mismatch_count == 1
    assert mask_diff(pred, gt) == 1


def test_identical_masks_are_perfect():
    mask = _mask([[255, 0, 255], [0, 255, 0]])
    metrics = mask_metrics(mask, mask)
    assert (metrics.accuracy, metrics.precision, metrics.true_positive_rate) == (1.0, 1.0, 1.0)
    assert metrics.undefined == ()


def test_unknown_reference_pixels_are_ignored():
    pred = _mask([[0, 255, 0]])
    gt = _mask([[128, 255, 0]])
    metrics = mask_metrics(pred, gt)
    assert metrics.total == 2
    assert metrics.accuracy == 1.0


def test_predicted_unknown_counts_as_not_free():
    metrics = mask_metrics(_mask([[128, 0]]), _mask([[255, 0]]))
    assert metrics.accuracy == 0.5
    assert metrics.true_positive_rate == 0.0


def test_rates_without_positives_are_flagged():
    metrics = mask_metrics(_mask([[0, 0]]), _mask([[0, 0]]))
    assert metrics.precision == 1.0
    assert metrics.true_positive_rate == 1.0
    assert metrics.undefined == ("precision", "tpr")
    assert metrics.as_dict()["undefined"] == ["precision", "tpr"]


def test_all_unknown_reference_is_an_error():
    with pytest.raises(EmptyValidSet):
        mask_metrics(_mask([[0, 255]]), _mask([[128, 128]]))


def test_mask_shapes_must_match():
    with pytest.raises(DimensionMismatch):
        mask_metrics(_mask([[0, 255]]), _mask([[0], [255]]))


def test_rmse_of_constant_bias_is_the_bias():
    gt = DenseDepthMap(np.array([[2.0, 3.0], [4.0, 5.0]]))
    pred = DenseDepthMap(gt.depth + 0.5)
    assert depth_rmse(pred, gt) == 0.5


def test_rmse_uses_pixels_known_in_both():
    gt = DenseDepthMap(np.array([[2.0, -1.0, 4.0]]))
    pred = DenseDepthMap(np.array([[2.0, 9.0, 7.0]]))
    assert depth_rmse(pred, gt) == pytest.approx(np.sqrt(4.5))
    assert depth_rmse(pred, gt, valid=np.array([[True, True, False]])) == 0.0


def test_rmse_without_valid_pixels():
    gt = DenseDepthMap(np.array([[-1.0, -1.0]]))
    with pytest.raises(EmptyValidSet):
        depth_rmse(DenseDepthMap(np.array([[1.0, 1.0]])), gt)
