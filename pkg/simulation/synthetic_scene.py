"""
Módulo que implementa el oráculo de escenas sintéticas.

Renderiza la imagen equirectangular de la cámara con su profundidad exacta,
muestrea el barrido del LiDAR y calcula la máscara de espacio libre de
referencia. Todas las intersecciones son analíticas (plano del suelo y
cajas por el método de las franjas) y sin antialiasing.
"""

import logging

import numpy as np

from geometry.sensor_geometry import direction_vectors, image_directions
from models.errors import ParseError, RangeError
from models.maps import UNKNOWN_DEPTH, DenseDepthMap, FreeSpaceMask, GreyImage, Label
from models.params import FreeSpaceParams
from models.scene import Box, Scene
from models.sensors import PointCloud

logger = logging.getLogger(__name__)

# Identificadores de superficie devueltos por cast_rays
NO_HIT = -1
FLOOR = 0

_MIN_T = 1e-12


def _slab_interval(origin, direction, low, high, t_near, t_far):
    """
    Recorta el intervalo [t_near, t_far] con una franja low ≤ origen + t·dir ≤ high.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        t0 = (low - origin) / direction
        t1 = (high - origin) / direction
    parallel = direction == 0
    inside = (origin >= low) & (origin <= high)
    t0 = np.where(parallel, np.where(inside, -np.inf, np.inf), t0)
    t1 = np.where(parallel, np.where(inside, np.inf, -np.inf), t1)
    return np.maximum(t_near, np.minimum(t0, t1)), np.minimum(t_far, np.maximum(t0, t1))


def intersect_box(box, origin, dx, dy, dz):
    """
    Distancia a lo largo de cada rayo hasta la primera cara de una caja.

    Args:
        box (Box): Caja alineada con los ejes.
        origin (tuple): Origen común de los rayos.
        dx, dy, dz (numpy.ndarray): Direcciones unitarias.

    Returns:
        numpy.ndarray: Distancia t, o infinito si el rayo no la toca.
    """
    t_near = np.full(np.shape(dx), -np.inf)
    t_far = np.full(np.shape(dx), np.inf)
    for axis, direction in enumerate((dx, dy, dz)):
        t_near, t_far = _slab_interval(origin[axis], direction, box.min_corner[axis],
                                       box.max_corner[axis], t_near, t_far)
    hit = (t_near <= t_far) & (t_near > _MIN_T)
    return np.where(hit, t_near, np.inf)


def cast_rays(scene, origin, dx, dy, dz):
    """
    Primer impacto de cada rayo con la escena.

    Args:
        scene (Scene): Escena.
        origin (tuple): Origen común (x, y, z).
        dx, dy, dz (numpy.ndarray): Direcciones unitarias.

    Returns:
        tuple: (t, superficie) donde superficie es NO_HIT, FLOOR o 1 + índice de caja.
    """
    drop = origin[2] - scene.floor_height
    with np.errstate(divide="ignore", invalid="ignore"):
        t_floor = np.where(dz < 0, drop / -dz, np.inf)
    t_floor = np.where(t_floor > _MIN_T, t_floor, np.inf)
    best_t = t_floor
    surface = np.where(np.isfinite(t_floor), FLOOR, NO_HIT)
    for index, box in enumerate(scene.boxes):
        t_box = intersect_box(box, origin, dx, dy, dz)
        nearer = t_box < best_t
        best_t = np.where(nearer, t_box, best_t)
        surface = np.where(nearer, index + 1, surface)
    return best_t, surface


def _render_rays(scene, rig, width, height):
    latitudes, longitudes = image_directions(width, height)
    dx, dy, dz = direction_vectors(latitudes, longitudes)
    origin = rig.camera_center
    t, surface = cast_rays(scene, origin, dx, dy, dz)
    return origin, dx, t, surface


def render_camera(scene, rig, width=None, height=None):
    """
    Renderiza la imagen equirectangular y su profundidad de referencia.

    Args:
        scene (Scene): Escena.
        rig (RigExtrinsics): Montaje de sensores.
        width (int): Ancho; por defecto el de la escena.
        height (int): Alto; por defecto el de la escena.

    Returns:
        tuple: (GreyImage, DenseDepthMap) donde la profundidad es la distancia
        frontal D del impacto y es desconocida en el fondo o detrás del LiDAR.
    """
    width = scene.image_width if width is None else width
    height = scene.image_height if height is None else height
    origin, dx, t, surface = _render_rays(scene, rig, width, height)

    intensities = np.array([scene.floor_intensity] + [box.intensity for box in scene.boxes])
    grey = np.where(surface == NO_HIT, scene.background_intensity,
                    intensities[np.maximum(surface, 0)])
    hit = surface != NO_HIT
    depth = np.where(hit, origin[0] + np.where(hit, t, 0.0) * dx, UNKNOWN_DEPTH)
    known = hit & (depth > 0)
    logger.info("Escena renderizada a %dx%d: %d píxeles con impacto", width, height, int(hit.sum()))
    return GreyImage(grey), DenseDepthMap(depth, known)


def sample_lidar(scene, rig, spec=None):
    """
    Simula un barrido del LiDAR sobre la escena.

    Args:
        scene (Scene): Escena.
        rig (RigExtrinsics): Montaje de sensores.
        spec (LidarScanSpec): Patrón de barrido; por defecto el de la escena.

    Returns:
        PointCloud: Retornos (d_L, β, γ_L) dentro del alcance, ordenados por
        canal y después por azimut.
    """
    spec = scene.scan if spec is None else spec
    betas, gammas = np.meshgrid(np.asarray(spec.elevations), spec.azimuths(), indexing="ij")
    betas = betas.ravel()
    gammas = gammas.ravel()
    dx, dy, dz = direction_vectors(betas, gammas)
    t, surface = cast_rays(scene, rig.lidar_center, dx, dy, dz)
    keep = (surface != NO_HIT) & (t <= spec.max_range)
    ranges = t[keep]

    if scene.range_noise_std > 0:
        rng = np.random.default_rng(scene.noise_seed)
        ranges = np.clip(ranges + rng.normal(0.0, scene.range_noise_std, ranges.size),
                         None, spec.max_range)
        positive = ranges > 0
        keep_idx = np.nonzero(keep)[0][positive]
        keep = np.zeros_like(keep)
        keep[keep_idx] = True
        ranges = ranges[positive]

    logger.info("Barrido LiDAR: %d de %d haces con retorno", int(keep.sum()), keep.size)
    return PointCloud(ranges, betas[keep], gammas[keep])


def ground_truth_free_mask(scene, rig, width=None, height=None,
                           height_tol=FreeSpaceParams.height_tol):
    """
    Máscara de espacio libre exacta de la escena.

    Un píxel es libre si su primer impacto es el suelo, ocupado si es una caja
    y desconocido si el rayo se pierde en el fondo.

    Args:
        scene (Scene): Escena.
        rig (RigExtrinsics): Montaje de sensores.
        width (int): Ancho; por defecto el de la escena.
        height (int): Alto; por defecto el de la escena.
        height_tol (float): Tolerancia de altura (m).

    Returns:
        FreeSpaceMask: Máscara de referencia.
    """
    width = scene.image_width if width is None else width
    height = scene.image_height if height is None else height
    origin, _, _, surface = _render_rays(scene, rig, width, height)
    labels = np.full(surface.shape, int(Label.UNKNOWN), dtype=np.uint8)
    if height_tol < 0:
        raise RangeError(f"height_tol no puede ser negativa: {height_tol}")
    # El suelo es un plano exacto: siempre está dentro de la tolerancia
    labels[surface == FLOOR] = Label.FREE
    labels[surface > FLOOR] = Label.OCCUPIED
    return FreeSpaceMask(labels)


SHIPPED_SCENES = {
    "floor": Scene(),
    "floor+box@3m": Scene(boxes=(Box((3.0, -0.5, 0.0), (3.6, 0.5, 1.0), 0.85),)),
    "ball-in-blindspot@1.5m": Scene(boxes=(Box((1.3, -0.2, 0.0), (1.7, 0.2, 0.12), 0.85),)),
    "wall@5m": Scene(boxes=(Box((5.0, -10.0, 0.0), (5.2, 10.0, 2.0), 0.7),)),
}


def shipped_scene(name):
    """
    Devuelve una de las escenas incluidas por su nombre.

    Raises:
        ParseError: Si el nombre no corresponde a ninguna escena.
    """
    try:
        return SHIPPED_SCENES[name]
    except KeyError:
        raise ParseError(f"escena desconocida: {name!r}; disponibles: "
                         f"{', '.join(sorted(SHIPPED_SCENES))}", field="scene") from None

