"""
Fixtures compartidas por las pruebas.

Las escenas incluidas se simulan una sola vez por sesión porque el
renderizado completo a 720×360 es la parte más cara de las pruebas.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import pytest

from models.grid import GridParams
from models.params import GpParams
from models.sensors import RigExtrinsics
from simulation.synthetic_scene import (ground_truth_free_mask, render_camera, sample_lidar,
                                        shipped_scene)


@dataclass(frozen=True)
class Simulation:
    scene: object
    grey: object
    depth: object
    gt_mask: object
    cloud: object


@lru_cache(maxsize=None)
def _simulate(name):
    rig = RigExtrinsics()
    scene = shipped_scene(name)
    grey, depth = render_camera(scene, rig)
    return Simulation(scene, grey, depth, ground_truth_free_mask(scene, rig), sample_lidar(scene, rig))


@pytest.fixture
def rig():
    return RigExtrinsics()


@pytest.fixture
def gp_params():
    return GpParams()


@pytest.fixture
def grid():
    return GridParams()


@pytest.fixture
def simulated():
    """Devuelve una función que simula una escena incluida por su nombre."""
    return _simulate


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
