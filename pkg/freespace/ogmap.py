"""
Módulo que construye y fusiona mallas de ocupación sobre el plano del suelo.

La malla del LiDAR se obtiene trazando cada retorno desde el robot; la de la
imagen proyecta cada píxel sobre el suelo suponiendo que los obstáculos
están a nivel del robot. La fusión conservadora se queda con el obstáculo
más cercano y la fusión por incertidumbre confía en la imagen sólo en la
zona ciega del LiDAR.
"""

import logging
import math

import numpy as np

from freespace._traversal import carve_free, shadowed_cells
from geometry.sensor_geometry import ground_intersection, image_directions
from models.errors import EmptyCloud, GridMismatch
from models.grid import OGMap, check_same_grid
from models.maps import Label
from models.params import FreeSpaceParams

logger = logging.getLogger(__name__)

# Confianza de una celda tomada de la fuente secundaria
FALLBACK_CONFIDENCE = 0.5


def blind_radius(rig):
    """
    Radio de la zona ciega: donde el haz más bajo alcanza el suelo.

    Returns:
        float: H_L / tan(semiapertura) en metros.
    """
    return rig.lidar_height / math.tan(rig.lidar_vfov_halfangle)


def blind_spot_mask(rig, grid):
    """
    Celdas del suelo que el LiDAR no puede ver.

    Args:
        rig (RigExtrinsics): Montaje de sensores.
        grid (GridParams): Geometría de la malla.

    Returns:
        numpy.ndarray: Máscara booleana; una celda es ciega si su centro está a
        menos de blind_radius del punto del suelo bajo el LiDAR.
    """
    x, y = grid.cell_centers()
    return np.hypot(x, y) < blind_radius(rig)


def lidar_ogmap(cloud, rig, grid, height_tol=FreeSpaceParams.height_tol, floor_height=0.0):
    """
    Construye la malla de ocupación a partir de un barrido del LiDAR.

    Los retornos por encima de la tolerancia de altura marcan su celda como
    ocupada; las celdas atravesadas antes de cada retorno y fuera de la zona
    ciega se marcan libres. Los retornos al nivel del suelo dejan libre también
    su celda final.
    Las celdas de la zona ciega que el rayo atraviesa quedan desconocidas.

    Args:
        cloud (PointCloud): Nube de retornos.
        rig (RigExtrinsics): Montaje de sensores.
        grid (GridParams): Geometría de la malla.
        height_tol (float): Tolerancia de altura (m).
        floor_height (float): Altura del suelo (m).

    Returns:
        OGMap: Malla con confianza 1 en las celdas decididas.

    Raises:
        EmptyCloud: Si la nube no tiene puntos.
    """
    if len(cloud) == 0:
        raise EmptyCloud("la nube de puntos está vacía")
    x, y, z = cloud.world_points(rig)
    obstacle = (z - floor_height) > height_tol
    rows, cols, inside = grid.world_to_cell(x, y)

    free = np.zeros(grid.shape, dtype=bool)
    occupied = np.zeros(grid.shape, dtype=bool)
    observable = ~blind_spot_mask(rig, grid)
    carve_free(0.0, 0.0, x / grid.cell_size, y / grid.cell_size,
               grid.origin_row, grid.origin_col, observable, free)
    occupied[rows[inside & obstacle], cols[inside & obstacle]] = True
    ground_hits = inside & ~obstacle
    free[rows[ground_hits], cols[ground_hits]] = True

    ogmap = OGMap.from_votes(grid, free, occupied)
    logger.info("Malla LiDAR: %d libres, %d ocupadas",
                int(ogmap.free.sum()), int(ogmap.occupied.sum()))
    return ogmap


def image_ogmap(mask, rig, grid, floor_height=0.0):
    """
    Proyecta una máscara de espacio libre sobre la malla de ocupación.

    Cada píxel por debajo del horizonte se lleva al punto del suelo donde
    corta su rayo; los píxeles no libres (ocupados o desconocidos) marcan esa
    celda como ocupada y los libres la marcan libre. Los píxeles en o por
    encima del horizonte no aportan nada.

    Args:
        mask (FreeSpaceMask): Máscara de espacio libre de la imagen.
        rig (RigExtrinsics): Montaje de sensores.
        grid (GridParams): Geometría de la malla.
        floor_height (float): Altura del suelo (m).

    Returns:
        OGMap: Malla con confianza 1 en las celdas decididas.
    """
    height, width = mask.shape
    latitudes, longitudes = image_directions(width, height)
    x, y, valid = ground_intersection(latitudes, longitudes, rig, floor_height)
    rows, cols, inside = grid.world_to_cell(np.where(valid, x, 0.0), np.where(valid, y, 0.0))
    hits = valid & inside

    free = np.zeros(grid.shape, dtype=bool)
    occupied = np.zeros(grid.shape, dtype=bool)
    free_hits = hits & mask.free
    blocked_hits = hits & ~mask.free
    free[rows[free_hits], cols[free_hits]] = True
    occupied[rows[blocked_hits], cols[blocked_hits]] = True

    ogmap = OGMap.from_votes(grid, free, occupied)
    logger.info("Malla de imagen: %d libres, %d ocupadas",
                int(ogmap.free.sum()), int(ogmap.occupied.sum()))
    return ogmap


def fuse_ogmaps_conservative(a, b):
    """
    Fusión conservadora: cualquier obstáculo prevalece.

    Una celda es ocupada si lo es en alguna malla y libre sólo si es libre en
    alguna y ocupada en ninguna. Después, las celdas libres que quedan detrás
    del obstáculo más cercano en su rayo desde el robot pasan a desconocidas.

    Args:
        a (OGMap): Primera malla.
        b (OGMap): Segunda malla.

    Returns:
        OGMap: Malla fusionada.

    Raises:
        GridMismatch: Si las mallas no comparten geometría.
    """
    check_same_grid(a, b)
    params = a.params
    occupied = a.occupied | b.occupied
    free = (a.free | b.free) & ~occupied
    state = np.full(params.shape, int(Label.UNKNOWN), dtype=np.uint8)
    state[free] = Label.FREE
    state[occupied] = Label.OCCUPIED

    shadow = shadowed_cells(state, params.origin_row, params.origin_col,
                            int(Label.FREE), int(Label.OCCUPIED))
    state[shadow] = Label.UNKNOWN
    logger.debug("Fusión conservadora: %d celdas libres en sombra", int(shadow.sum()))

    confidence = np.zeros(params.shape)
    for source in (a, b):
        agrees = source.state == state
        confidence = np.where(agrees, np.maximum(confidence, source.confidence), confidence)
    return OGMap(params, state, confidence)


def fuse_ogmaps_uncertainty(lidar, image, blind):
    """
    Fusión por incertidumbre: la imagen manda en la zona ciega y el LiDAR fuera.

    Cuando la fuente preferida no sabe nada de una celda se toma el estado de
    la otra con confianza FALLBACK_CONFIDENCE.

    Args:
        lidar (OGMap): Malla del LiDAR.
        image (OGMap): Malla de la imagen.
        blind (numpy.ndarray): Máscara de celdas ciegas.

    Returns:
        OGMap: Malla fusionada.

    Raises:
        GridMismatch: Si las mallas o la máscara no comparten geometría.
    """
    check_same_grid(lidar, image)
    blind = np.asarray(blind, dtype=bool)
    if blind.shape != lidar.params.shape:
        raise GridMismatch(f"la máscara ciega tiene forma {blind.shape}, la malla {lidar.params.shape}")

    primary_state = np.where(blind, image.state, lidar.state)
    primary_conf = np.where(blind, image.confidence, lidar.confidence)
    secondary_state = np.where(blind, lidar.state, image.state)

    use_secondary = (primary_state == Label.UNKNOWN) & (secondary_state != Label.UNKNOWN)
    state = np.where(use_secondary, secondary_state, primary_state).astype(np.uint8)
    confidence = np.where(use_secondary, FALLBACK_CONFIDENCE, primary_conf)
    return OGMap(lidar.params, state, confidence)
