import math

import numpy as np
import pytest

from geometry.sensor_geometry import image_directions
from models.errors import ParseError, RangeError
from models.maps import Label
from models.scene import Box, LidarScanSpec, Scene
from models.sensors import RigExtrinsics
from simulation.synthetic_scene import (FLOOR, NO_HIT, SHIPPED_SCENES, cast_rays,
                                        ground_truth_free_mask, intersect_box, render_camera,
                                        sample_lidar, shipped_scene)


def test_box_rejects_empty_volume():
    with pytest.raises(RangeError):
        Box((1.0, 0.0, 0.0), (1.0, 1.0, 1.0))
    with pytest.raises(RangeError):
        Box((0.0, 0.0, 0.0), (1.0, 1.0, 1.0), intensity=1.5)


def test_scan_azimuths_include_straight_ahead():
    azimuths = LidarScanSpec().azimuths()
    assert azimuths.size == 1800
    assert 0.0 in azimuths
    assert np.all((azimuths > -math.pi) & (azimuths <= math.pi))


def test_scan_elevations_span_the_vertical_field():
    spec = LidarScanSpec()
    assert len(spec.elevations) == 16
    assert spec.elevations[0] == pytest.approx(-math.radians(15.0))
    assert spec.elevations[-1] == pytest.approx(math.radians(15.0))


def test_intersect_box_front_face():
    box = Box((3.0, -0.5, 0.0), (3.6, 0.5, 1.0))
    t = intersect_box(box, (0.0, 0.0, 0.5), np.array([1.0, -1.0]), np.zeros(2), np.zeros(2))
    assert t[0] == pytest.approx(3.0)
    assert np.isinf(t[1])


def test_cast_rays_reports_floor_and_misses():
    scene = Scene()
    dx = np.array([math.cos(0.5), 1.0])
    dz = np.array([-math.sin(0.5), 0.0])
    t, surface = cast_rays(scene, (0.0, 0.0, 1.0), dx, np.zeros(2), dz)
    assert surface.tolist() == [FLOOR, NO_HIT]
    assert t[0] == pytest.approx(1.0 / math.sin(0.5))


def test_floor_render_matches_analytic_depth(rig):
    grey, depth = render_camera(Scene(), rig, width=72, height=36)
    latitudes, longitudes = image_directions(72, 36)
    below = latitudes > 0
    assert np.all(grey.intensity[below] == 0.45)
    assert np.all(grey.intensity[~below] == 0.15)
    ahead = below & (np.abs(longitudes) < 1.0)
    expected = rig.frontal_offset + rig.cam_height / np.tan(latitudes) * np.cos(longitudes)
    assert depth.known[ahead].all()
    np.testing.assert_allclose(depth.depth[ahead], expected[ahead], rtol=1e-12)
    assert not depth.known[~below].any()


def test_centred_camera_sees_a_symmetric_box():
    scene = SHIPPED_SCENES["floor+box@3m"]
    grey, _ = render_camera(scene, RigExtrinsics(lateral_offset=0.0), width=144, height=72)
    box = grey.intensity == scene.boxes[0].intensity
    assert box.sum() > 20
    assert np.count_nonzero(box != box[:, ::-1]) <= 2


def test_finer_render_refines_only_silhouette_edges(rig):
    scene = SHIPPED_SCENES["floor+box@3m"]
    coarse_grey, coarse_depth = render_camera(scene, rig, width=144, height=72)
    fine_grey, fine_depth = render_camera(scene, rig, width=287, height=143)
    # Con 2W−1 × 2H−1 píxeles la rejilla gruesa es la de índices pares
    assert np.array_equal(fine_grey.intensity[::2, ::2], coarse_grey.intensity)
    np.testing.assert_allclose(fine_depth.depth[::2, ::2], coarse_depth.depth, rtol=1e-12)

    corners = coarse_grey.intensity
    uniform = ((corners[:-1, :-1] == corners[1:, :-1]) & (corners[:-1, :-1] == corners[:-1, 1:])
               & (corners[:-1, :-1] == corners[1:, 1:]))
    changed = uniform & (fine_grey.intensity[1::2, 1::2] != corners[:-1, :-1])
    assert uniform.sum() > 0.9 * uniform.size
    assert changed.sum() <= 2


def test_ground_truth_mask_labels_surfaces(rig):
    scene = SHIPPED_SCENES["floor+box@3m"]
    mask = ground_truth_free_mask(scene, rig, width=144, height=72)
    latitudes, _ = image_directions(144, 72)
    assert mask.unknown[latitudes <= 0].sum() > 0
    assert mask.occupied.any()
    assert np.all(mask.labels[latitudes > 0] != Label.UNKNOWN)
    with pytest.raises(RangeError):
        ground_truth_free_mask(scene, rig, width=8, height=4, height_tol=-0.1)


def test_floor_scan_has_one_return_per_downward_beam(rig):
    cloud = sample_lidar(Scene(), rig)
    assert len(cloud) == 8 * 1800
    assert np.all(cloud.latitudes > 0)
    np.testing.assert_allclose(cloud.ranges, rig.lidar_height / np.sin(cloud.latitudes), rtol=1e-12)


def test_wall_return_straight_ahead(rig):
    scene = shipped_scene("wall@5m")
    cloud = sample_lidar(scene, rig)
    beta = scene.scan.elevations[8]
    assert beta == pytest.approx(math.radians(1.0))
    ahead = (cloud.latitudes == beta) & (cloud.longitudes == 0.0)
    assert ahead.sum() == 1
    assert cloud.ranges[ahead][0] == pytest.approx(5.0 / math.cos(beta), rel=1e-12)


def test_ball_in_blind_spot_is_invisible_to_lidar(rig):
    scene = shipped_scene("ball-in-blindspot@1.5m")
    x, y, z = sample_lidar(scene, rig).world_points(rig)
    assert np.all(np.abs(z) < 1e-9)
    assert not scene.boxes[0].contains_xy(x, y).any()


def test_range_noise_is_seeded(rig):
    noisy = Scene(range_noise_std=0.02, noise_seed=3)
    first = sample_lidar(noisy, rig)
    second = sample_lidar(noisy, rig)
    clean = sample_lidar(Scene(), rig)
    assert np.array_equal(first.ranges, second.ranges)
    assert not np.array_equal(first.ranges, clean.ranges)
    assert np.all(first.ranges > 0)


def test_narrow_scan_respects_max_range():
    rig = RigExtrinsics()
    spec = LidarScanSpec(max_range=20.0)
    cloud = sample_lidar(Scene(), rig, spec)
    assert np.all(cloud.ranges <= 20.0)
    assert len(cloud) < 8 * 1800


def test_unknown_scene_name():
    with pytest.raises(ParseError):
        shipped_scene("moon")
    assert set(SHIPPED_SCENES) == {"floor", "floor+box@3m", "ball-in-blindspot@1.5m", "wall@5m"}
