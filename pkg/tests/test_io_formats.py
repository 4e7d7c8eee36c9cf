import math
import os
import struct

import numpy as np
import pytest

from io_formats.artifacts import (load_cloud, load_depth, load_grey, load_mask, load_variance,
                                  read_ogmap, save_cloud, save_depth, save_grey, save_mask,
                                  save_variance, write_ogmap)
from io_formats.config import (gp_from_config, grid_from_config, parse_config, read_config,
                               rig_from_config)
from io_formats.netpbm import read_pfm, read_pgm, write_pfm, write_pgm
from io_formats.point_cloud import read_point_cloud, write_point_cloud
from io_formats.scene_file import read_scene
from models.errors import ConfigError, GridMismatch, ParseError, RangeError
from models.grid import GridParams, OGMap
from models.maps import DenseDepthMap, FreeSpaceMask, GreyImage, Label, UncertaintyMap
from models.sensors import PointCloud
from simulation.synthetic_scene import SHIPPED_SCENES

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


# Nubes de puntos

def test_read_single_point():
    cloud = read_point_cloud("5.0 0.0 0.0\n")
    assert len(cloud) == 1
    point = next(iter(cloud))
    assert (point.range, point.latitude, point.longitude) == (5.0, 0.0, 0.0)


def test_comments_and_blank_lines_are_skipped():
    cloud = read_point_cloud("# comentario\n\n5.0 0.1 -0.2\n")
    assert len(cloud) == 1


def test_missing_field_names_the_line():
    with pytest.raises(ParseError, match="línea 1") as info:
        read_point_cloud("5.0 0.0\n")
    assert info.value.line == 1


def test_non_numeric_field():
    with pytest.raises(ParseError) as info:
        read_point_cloud("# x\n1 2 3\nuno 2 3\n")
    assert info.value.line == 3


def test_non_positive_range_is_rejected():
    with pytest.raises(RangeError, match="línea 1"):
        read_point_cloud("0.0 0.1 0.1\n")


def test_point_cloud_text_round_trip(rng):
    cloud = PointCloud(rng.uniform(0.5, 100.0, 200), rng.uniform(-0.3, 0.3, 200),
                       rng.uniform(-math.pi, math.pi, 200))
    back = read_point_cloud(write_point_cloud(cloud))
    assert np.array_equal(back.ranges, cloud.ranges)
    assert np.array_equal(back.latitudes, cloud.latitudes)
    assert np.array_equal(back.longitudes, cloud.longitudes)


# PGM y PFM

def test_pgm_bytes_decode_to_intensities():
    data = b"P5\n2 2\n255\n" + bytes([0, 128, 255, 64])
    image = GreyImage.from_bytes(read_pgm(data))
    np.testing.assert_array_equal(image.intensity, [[0.0, 128 / 255], [1.0, 64 / 255]])


def test_pgm_writer_layout():
    assert write_pgm(np.array([[1, 2, 3]], dtype=np.uint8)) == b"P5\n3 1\n255\n\x01\x02\x03"


def test_pgm_header_comments_are_skipped():
    data = b"P5\n# creado a mano\n2 1\n255\n\x00\xff"
    assert read_pgm(data).tolist() == [[0, 255]]


@pytest.mark.parametrize("data, field", [
    (b"P6\n1 1\n255\n\x00", "magic"),
    (b"P5\nx 1\n255\n\x00", "width"),
    (b"P5\n1 1\n65535\n\x00\x00", "maxval"),
    (b"P5\n2 1\n255\n\x00", "payload"),
    (b"P5\n1 1\n255\n\x00\x00", "payload"),
])
def test_malformed_pgm_names_the_field(data, field):
    with pytest.raises(ParseError) as info:
        read_pgm(data)
    assert info.value.field == field


def test_pfm_writer_layout():
    data = write_pfm(np.array([[1.0], [2.0]]))
    assert data.startswith(b"Pf\n1 2\n-1.0\n")
    # Las filas se guardan de abajo arriba
    assert struct.unpack("<2f", data[len(b"Pf\n1 2\n-1.0\n"):]) == (2.0, 1.0)


def test_pfm_round_trip_is_bit_exact(rng):
    values = rng.normal(0.0, 10.0, (32, 32)).astype(np.float32)
    data = write_pfm(values)
    back = read_pfm(data)
    assert back.dtype == np.float32
    assert back.tobytes() == values.tobytes()
    assert write_pfm(back) == data


def test_big_endian_pfm_is_rejected():
    data = b"Pf\n1 1\n1.0\n" + struct.pack(">f", 1.0)
    with pytest.raises(ParseError) as info:
        read_pfm(data)
    assert info.value.field == "scale"


def test_pfm_trailing_bytes_are_rejected():
    with pytest.raises(ParseError):
        read_pfm(write_pfm(np.zeros((2, 2))) + b"\x00")


# Configuración

def test_config_values_and_comments():
    document = parse_config("# montaje\ncam_height = 0.6  # metros\n\nlidar_height=0.7\n", "rig")
    assert document.get_float("cam_height") == 0.6
    assert document.lines["lidar_height"] == 4
    assert "frontal_offset" not in document


def test_unknown_key_is_named():
    with pytest.raises(ConfigError, match="camera_height") as info:
        parse_config("cam_height=0.5\ncamera_height=0.6\n", "rig")
    assert info.value.line == 2
    assert info.value.field == "camera_height"


def test_duplicate_key_is_rejected():
    with pytest.raises(ConfigError, match="k_p"):
        parse_config("k_p=1\nk_p=2\n", "gp")


def test_line_without_equals_is_rejected():
    with pytest.raises(ConfigError):
        parse_config("cell_size 0.1\n", "grid")


def test_invalid_value_names_the_key():
    document = parse_config("patch_size=big\n", "gp")
    with pytest.raises(ConfigError, match="patch_size"):
        gp_from_config(document)


def test_rig_precedence_defaults_file_flags():
    document = parse_config("cam_height=0.9\nlidar_vfov_halfangle_deg=20\n", "rig")
    rig = rig_from_config(document, lidar_height=1.2, frontal_offset=None)
    assert rig.cam_height == 0.9
    assert rig.lidar_height == 1.2
    assert rig.frontal_offset == 0.5
    assert rig.lidar_vfov_halfangle == pytest.approx(math.radians(20.0))


def test_grid_config_splits_grid_and_thresholds():
    document = parse_config("cell_size=0.2\nunc_tol=0.1\n", "grid")
    grid, freespace = grid_from_config(document, height_tol=0.02)
    assert grid.cell_size == 0.2
    assert grid.shape == (100, 100)
    assert freespace.unc_tol == 0.1
    assert freespace.height_tol == 0.02


def test_shipped_config_files_load():
    rig = rig_from_config(read_config(os.path.join(ROOT, "config", "rig.conf"), "rig"))
    params = gp_from_config(read_config(os.path.join(ROOT, "config", "gp.conf"), "gp"))
    grid, freespace = grid_from_config(read_config(os.path.join(ROOT, "config", "grid.conf"), "grid"))
    assert rig.lidar_height == 0.61
    assert params.patch_size == 32
    assert grid.n_rows == 200
    assert freespace.max_depth == 10.0


# Escenas

def test_scene_file_with_boxes():
    scene = read_scene("image_width=90\nimage_height=45\n"
                       "box = 1, -1, 0, 2, 1, 0.5, 0.7\n"
                       "box = 4, -1, 0, 5, 1, 1.0, 0.2\n")
    assert (scene.image_width, scene.image_height) == (90, 45)
    assert len(scene.boxes) == 2
    assert scene.boxes[1].max_corner == (5.0, 1.0, 1.0)
    assert scene.boxes[1].intensity == 0.2


def test_scene_box_errors_name_the_line():
    with pytest.raises(ConfigError) as info:
        read_scene("floor_height=0\nbox = 1, 2, 3\n")
    assert info.value.line == 2
    with pytest.raises(ConfigError):
        read_scene("box = 2, 0, 0, 1, 1, 1, 0.5\n")


@pytest.mark.parametrize("name", sorted(SHIPPED_SCENES))
def test_shipped_scene_files_match_built_in_scenes(name):
    with open(os.path.join(ROOT, "scenes", f"{name}.scene"), encoding="utf-8") as handle:
        scene = read_scene(handle.read())
    assert scene == SHIPPED_SCENES[name]


# Artefactos en disco

def test_artifact_round_trips(tmp_path, rng):
    grey = GreyImage.from_bytes(rng.integers(0, 256, (6, 9)).astype(np.uint8))
    save_grey(tmp_path / "grey.pgm", grey)
    assert np.array_equal(load_grey(tmp_path / "grey.pgm").intensity, grey.intensity)

    mask = FreeSpaceMask(rng.choice([0, 128, 255], (6, 9)))
    save_mask(tmp_path / "mask.pgm", mask)
    assert np.array_equal(load_mask(tmp_path / "mask.pgm").labels, mask.labels)

    depth = DenseDepthMap(np.array([[1.5, -1.0], [0.25, 8.0]]))
    save_depth(tmp_path / "depth.pfm", depth, known_path=tmp_path / "known.pgm")
    back = load_depth(tmp_path / "depth.pfm", known_path=tmp_path / "known.pgm")
    assert np.array_equal(back.depth, depth.depth)
    assert np.array_equal(back.known, depth.known)

    variance = UncertaintyMap(np.array([[0.0, 0.5], [1.0, 0.125]]))
    save_variance(tmp_path / "variance.pfm", variance)
    assert np.array_equal(load_variance(tmp_path / "variance.pfm").variance, variance.variance)

    cloud = PointCloud([1.0, 2.5], [0.1, -0.1], [0.0, 3.0])
    save_cloud(tmp_path / "cloud.txt", cloud)
    assert np.array_equal(load_cloud(tmp_path / "cloud.txt").ranges, cloud.ranges)


def test_known_depth_must_be_positive():
    with pytest.raises(RangeError):
        DenseDepthMap(np.array([[2.0, -3.0]]), np.array([[True, True]]))
    with pytest.raises(RangeError):
        DenseDepthMap(np.array([[2.0, np.inf]]))
    depth = DenseDepthMap(np.array([[2.0, -3.0]]), np.array([[True, False]]))
    assert depth.depth.tolist() == [[2.0, -1.0]]


def test_known_mask_survives_without_sidecar(tmp_path):
    depth = DenseDepthMap(np.array([[1.5, 7.0], [0.25, 3.0]]),
                          np.array([[True, False], [True, True]]))
    save_depth(tmp_path / "depth.pfm", depth)
    back = load_depth(tmp_path / "depth.pfm")
    assert np.array_equal(back.known, depth.known)
    assert np.array_equal(back.depth, depth.depth)


def test_ogmap_round_trip(tmp_path):
    params = GridParams(cell_size=0.5, extent_x=2.0, extent_y=1.5)
    state = np.full(params.shape, int(Label.UNKNOWN), dtype=np.uint8)
    state[0, 0] = Label.OCCUPIED
    state[3, 1] = Label.FREE
    ogmap = OGMap(params, state, np.where(state == Label.UNKNOWN, 0.0, 0.5))
    paths = write_ogmap(str(tmp_path / "ogmap"), ogmap)
    assert [p.rsplit("/", 1)[-1] for p in paths] == ["ogmap.pgm", "ogmap_confidence.pfm",
                                                     "ogmap.hdr"]
    back = read_ogmap(str(tmp_path / "ogmap"))
    assert back.params == params
    assert np.array_equal(back.state, state)
    assert np.array_equal(back.confidence, ogmap.confidence)


def test_ogmap_header_must_match_grid(tmp_path):
    params = GridParams(cell_size=0.5, extent_x=2.0, extent_y=2.0)
    stem = str(tmp_path / "ogmap")
    write_ogmap(stem, OGMap(params))
    with open(stem + ".hdr", encoding="utf-8") as handle:
        text = handle.read().replace("origin_row=3", "origin_row=2")
    with open(stem + ".hdr", "w", encoding="utf-8") as handle:
        handle.write(text)
    with pytest.raises(GridMismatch):
        read_ogmap(stem)
