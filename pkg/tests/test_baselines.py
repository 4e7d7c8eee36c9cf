import numpy as np
import pytest

from fusion.baselines import baseline_idw, baseline_nearest
from models.errors import EmptyMap, RangeError
from models.maps import UNKNOWN_DEPTH, SparseDepthMap


def _row(values):
    return SparseDepthMap(np.array([values], dtype=np.float64))


def test_nearest_fills_every_pixel():
    dense = baseline_nearest(_row([1.0, -1, -1, -1, 5.0]))
    assert dense.known.all()
    assert dense.depth.tolist() == [[1.0, 1.0, 1.0, 5.0, 5.0]]


def test_nearest_breaks_ties_towards_first_pixel():
    depth = np.full((3, 3), UNKNOWN_DEPTH)
    depth[0, 1] = 2.0
    depth[1, 0] = 3.0
    depth[1, 2] = 4.0
    depth[2, 1] = 5.0
    dense = baseline_nearest(SparseDepthMap(depth))
    # El centro equidista de los cuatro: gana (0, 1)
    assert dense.depth[1, 1] == 2.0


def test_idw_weights_by_inverse_square_distance():
    dense = baseline_idw(_row([2.0, -1, -1, -1, 6.0]), power=2.0, radius=8.0)
    assert dense.depth[0, 2] == pytest.approx(4.0)
    assert dense.depth[0, 1] == pytest.approx(2.4)
    assert dense.depth[0, 0] == 2.0


def test_idw_falls_back_to_nearest_outside_radius():
    dense = baseline_idw(_row([2.0, -1, -1, -1, 6.0]), radius=1.5)
    assert dense.depth[0, 1] == pytest.approx(2.0)
    assert dense.depth[0, 2] == 2.0


def test_baselines_reject_empty_map():
    empty = SparseDepthMap.empty(4, 4)
    with pytest.raises(EmptyMap):
        baseline_nearest(empty)
    with pytest.raises(EmptyMap):
        baseline_idw(empty)


def test_idw_rejects_invalid_parameters():
    with pytest.raises(RangeError):
        baseline_idw(_row([1.0, -1]), power=0.0)
