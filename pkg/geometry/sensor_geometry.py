"""
Módulo que implementa la alineación geométrica entre el LiDAR y la cámara.

Convierte los retornos polares del LiDAR en direcciones de la cámara
equirectangular (primero la longitud γ_C, después la latitud α, que depende
de cos γ_C) y éstas en coordenadas de píxel. También ofrece las
transformaciones inversas que usan el simulador y el detector de espacio
libre: de píxel a dirección, de punto del mundo a lecturas de ambos sensores
y de rayo de cámara a punto del suelo.

Marco de mundo: x hacia delante, y hacia la izquierda, z hacia arriba. Las
latitudes son positivas por debajo del horizonte; la fila 0 corresponde a
α = π/2 y la última fila a α = −π/2.
"""

import logging
import math

import numpy as np
from scipy import ndimage

from models.errors import DegenerateGeometry, EmptyCloud, RangeError
from models.maps import UNKNOWN_DEPTH, SparseDepthMap
from models.sensors import CameraDirection, LidarPoint, PixelCoord

logger = logging.getLogger(__name__)

# Tolerancia para declarar degenerada la proyección de un punto
DEGENERATE_TOL = 1e-12

# Distancia frontal mínima (m) de un retorno proyectable
MIN_FORWARD_DISTANCE = 0.05

# Ventana angular (rad) y salto relativo de distancia del filtro de oclusión
OCCLUSION_WINDOW = math.radians(1.25)
OCCLUSION_GAP = 0.2


def _wrap_longitude(gamma):
    # atan2 devuelve −π para y = −0.0; el intervalo es (−π, π]
    return math.pi if gamma <= -math.pi else gamma


def _camera_offsets(ranges, latitudes, longitudes, rig):
    horizontal = ranges * np.cos(latitudes)
    numerator = horizontal * np.sin(longitudes) + rig.lateral_offset
    denominator = horizontal * np.cos(longitudes) - rig.frontal_offset
    drop = (rig.cam_height - rig.lidar_height) + ranges * np.sin(latitudes)
    return numerator, denominator, drop


def camera_longitude(point, rig):
    """
    Calcula la longitud γ_C con la que la cámara ve un retorno del LiDAR.

    Args:
        point (LidarPoint): Retorno polar (d_L, β, γ_L).
        rig (RigExtrinsics): Montaje de sensores.

    Returns:
        float: γ_C = atan2(d_L·cos β·sin γ_L + Δy, d_L·cos β·cos γ_L − Δx), en (−π, π].

    Raises:
        DegenerateGeometry: Si la proyección del punto cae sobre el eje de la cámara.
    """
    numerator, denominator, _ = _camera_offsets(
        point.range, point.latitude, point.longitude, rig)
    if abs(numerator) < DEGENERATE_TOL and abs(denominator) < DEGENERATE_TOL:
        raise DegenerateGeometry(
            f"el punto ({point.range}, {point.latitude}, {point.longitude}) "
            "cae sobre el eje vertical de la cámara")
    return _wrap_longitude(math.atan2(numerator, denominator))


def camera_latitude(point, rig, longitude):
    """
    Calcula la latitud α con la que la cámara ve un retorno del LiDAR.

    Equivale a α = atan(((H_C − H_L) + d_L·sin β)·cos γ_C / (d_L·cos β·cos γ_L − Δx)),
    evaluada como atan2 del desnivel sobre la distancia horizontal a la cámara
    para que los puntos laterales (denominador nulo) sigan siendo válidos.

    Args:
        point (LidarPoint): Retorno polar.
        rig (RigExtrinsics): Montaje de sensores.
        longitude (float): γ_C ya calculada con camera_longitude.

    Returns:
        float: Latitud α en radianes, positiva por debajo del horizonte.

    Raises:
        DegenerateGeometry: Si la proyección del punto cae sobre el eje de la cámara.
    """
    numerator, denominator, drop = _camera_offsets(
        point.range, point.latitude, point.longitude, rig)
    if abs(numerator) < DEGENERATE_TOL and abs(denominator) < DEGENERATE_TOL:
        raise DegenerateGeometry(
            f"el punto ({point.range}, {point.latitude}, {point.longitude}) "
            "cae sobre el eje vertical de la cámara")
    cos_gamma = math.cos(longitude)
    if abs(denominator) > DEGENERATE_TOL and abs(cos_gamma) > DEGENERATE_TOL:
        # Distancia horizontal cámara-objeto reconstruida a partir de γ_C
        horizontal = denominator / cos_gamma
    else:
        horizontal = math.hypot(numerator, denominator)
    return math.atan2(drop, abs(horizontal))


def align_point(point, rig):
    """
    Alinea un retorno del LiDAR con la cámara.

    Args:
        point (LidarPoint): Retorno polar.
        rig (RigExtrinsics): Montaje de sensores.

    Returns:
        CameraDirection: Dirección (α, γ_C) del mismo objeto vista desde la cámara.

    Raises:
        DegenerateGeometry: Si el punto no tiene dirección de cámara definida.
    """
    longitude = camera_longitude(point, rig)
    latitude = camera_latitude(point, rig, longitude)
    return CameraDirection(latitude, longitude)


def align_cloud(cloud, rig):
    """
    Versión vectorizada de align_point para una nube completa.

    Los puntos degenerados reciben NaN en ambas salidas en lugar de lanzar
    una excepción.

    Args:
        cloud (PointCloud): Nube de retornos.
        rig (RigExtrinsics): Montaje de sensores.

    Returns:
        tuple: Arreglos (latitudes α, longitudes γ_C) en radianes.
    """
    numerator, denominator, drop = _camera_offsets(
        cloud.ranges, cloud.latitudes, cloud.longitudes, rig)
    longitudes = np.arctan2(numerator, denominator)
    longitudes = np.where(longitudes <= -np.pi, np.pi, longitudes)
    latitudes = np.arctan2(drop, np.hypot(numerator, denominator))
    degenerate = (np.abs(numerator) < DEGENERATE_TOL) & (np.abs(denominator) < DEGENERATE_TOL)
    if np.any(degenerate):
        logger.warning("Se descartan %d puntos sobre el eje de la cámara", int(degenerate.sum()))
        longitudes = np.where(degenerate, np.nan, longitudes)
        latitudes = np.where(degenerate, np.nan, latitudes)
    return latitudes, longitudes


def _round_half_up(values):
    return np.floor(np.asarray(values, dtype=np.float64) + 0.5).astype(np.int64)


def directions_to_pixels(latitudes, longitudes, width, height):
    """
    Proyección equirectangular vectorizada de direcciones a píxeles.

    Args:
        latitudes (numpy.ndarray): α en radianes.
        longitudes (numpy.ndarray): γ_C en radianes.
        width (int): Ancho W de la imagen.
        height (int): Alto Hpx de la imagen.

    Returns:
        tuple: Arreglos enteros (filas, columnas), redondeados hacia arriba en el
        medio y recortados a los límites de la imagen.
    """
    if width < 1 or height < 1:
        raise RangeError(f"dimensiones de imagen inválidas: {width}x{height}")
    cols = _round_half_up((np.asarray(longitudes) / (2.0 * np.pi) + 0.5) * (width - 1))
    rows = _round_half_up((0.5 - np.asarray(latitudes) / np.pi) * (height - 1))
    return np.clip(rows, 0, height - 1), np.clip(cols, 0, width - 1)


def direction_to_pixel(direction, width, height):
    """
    Convierte una dirección de cámara en el píxel equirectangular que la contiene.

    Args:
        direction (CameraDirection): Dirección (α, γ_C).
        width (int): Ancho W de la imagen.
        height (int): Alto Hpx de la imagen.

    Returns:
        PixelCoord: Píxel recortado a los límites de la imagen.
    """
    rows, cols = directions_to_pixels(direction.latitude, direction.longitude, width, height)
    return PixelCoord(int(rows), int(cols))


def pixel_to_direction(rows, cols, width, height):
    """
    Inversa de la proyección equirectangular: dirección del centro de cada píxel.

    Args:
        rows (numpy.ndarray): Filas.
        cols (numpy.ndarray): Columnas.
        width (int): Ancho W de la imagen.
        height (int): Alto Hpx de la imagen.

    Returns:
        tuple: Arreglos (latitudes α, longitudes γ_C) en radianes.
    """
    rows = np.asarray(rows, dtype=np.float64)
    cols = np.asarray(cols, dtype=np.float64)
    col_fraction = cols / (width - 1) if width > 1 else np.full_like(cols, 0.5)
    row_fraction = rows / (height - 1) if height > 1 else np.full_like(rows, 0.5)
    longitudes = (col_fraction - 0.5) * 2.0 * np.pi
    latitudes = (0.5 - row_fraction) * np.pi
    return latitudes, longitudes


def image_directions(width, height):
    """
    Direcciones de todos los píxeles de una imagen.

    Returns:
        tuple: Arreglos (latitudes, longitudes) con forma (height, width).
    """
    rows, cols = np.indices((height, width))
    return pixel_to_direction(rows, cols, width, height)


def direction_vectors(latitudes, longitudes):
    """
    Vectores unitarios de mundo asociados a direcciones (latitud, longitud).

    Returns:
        tuple: Componentes (dx, dy, dz); dz es negativa para latitudes positivas.
    """
    cos_lat = np.cos(latitudes)
    return cos_lat * np.cos(longitudes), cos_lat * np.sin(longitudes), -np.sin(latitudes)


def camera_ranges(cloud, rig):
    """
    Distancia de cada retorno al centro de la cámara.

    Args:
        cloud (PointCloud): Nube de retornos.
        rig (RigExtrinsics): Montaje de sensores.

    Returns:
        numpy.ndarray: Distancias en metros.
    """
    numerator, denominator, drop = _camera_offsets(
        cloud.ranges, cloud.latitudes, cloud.longitudes, rig)
    return np.sqrt(numerator ** 2 + denominator ** 2 + drop ** 2)


def occluded_mask(rows, cols, ranges, width, height, window=OCCLUSION_WINDOW, gap=OCCLUSION_GAP):
    """
    Marca los retornos que la cámara no puede ver por estar detrás de otros.

    El LiDAR y la cámara no comparten centro: un objeto cercano tapa para la
    cámara retornos lejanos que el LiDAR sí alcanza y que, proyectados, caen
    sobre el objeto. Se descarta un retorno cuando, dentro de la ventana
    angular alrededor de su píxel, otro retorno está más cerca de la cámara
    que (1 − gap) veces su distancia.

    Args:
        rows (numpy.ndarray): Fila de cada retorno.
        cols (numpy.ndarray): Columna de cada retorno.
        ranges (numpy.ndarray): Distancia de cada retorno a la cámara (m).
        width (int): Ancho de la imagen.
        height (int): Alto de la imagen.
        window (float): Semiancho angular de la ventana (rad).
        gap (float): Salto relativo de distancia que se considera oclusión.

    Returns:
        numpy.ndarray: Máscara booleana, verdadera en los retornos ocultos.
    """
    if not 0.0 < gap < 1.0:
        raise RangeError(f"el salto de oclusión debe estar en (0, 1): {gap}")
    row_radius = int(window * (height - 1) / math.pi) if height > 1 else 0
    col_radius = int(window * (width - 1) / (2.0 * math.pi)) if width > 1 else 0
    nearest = np.full((height, width), np.inf)
    np.minimum.at(nearest, (rows, cols), ranges)
    # Las columnas se cierran sobre sí mismas en ±π
    nearest = ndimage.minimum_filter(nearest, size=(2 * row_radius + 1, 2 * col_radius + 1),
                                     mode=("nearest", "wrap"))
    return nearest[rows, cols] < (1.0 - gap) * ranges


def project_cloud(cloud, rig, grey, drop_occluded=False):
    """
    Proyecta una nube de puntos sobre la rejilla de la imagen.

    Cada píxel alcanzado guarda la distancia frontal D = d_L·cos β·cos γ_L; si
    varios puntos caen en el mismo píxel se conserva el más cercano. Sólo se
    proyectan los retornos con D > MIN_FORWARD_DISTANCE.

    Args:
        cloud (PointCloud): Nube de retornos.
        rig (RigExtrinsics): Montaje de sensores.
        grey (GreyImage): Imagen que fija la rejilla de salida.
        drop_occluded (bool): Descarta antes los retornos ocultos a la cámara
            (ver occluded_mask).

    Returns:
        SparseDepthMap: Mapa disperso del tamaño de la imagen.

    Raises:
        EmptyCloud: Si la nube no tiene puntos.
    """
    if len(cloud) == 0:
        raise EmptyCloud("la nube de puntos está vacía")
    height, width = grey.shape
    distances = cloud.ground_distances()
    ahead = distances > MIN_FORWARD_DISTANCE
    if not np.all(ahead):
        logger.warning("Se descartan %d puntos por detrás del plano lateral del LiDAR",
                       int((~ahead).sum()))
    cloud = cloud.subset(ahead)
    latitudes, longitudes = align_cloud(cloud, rig)
    valid = np.isfinite(latitudes)
    cloud = cloud.subset(valid)
    distances = distances[ahead][valid]
    rows, cols = directions_to_pixels(latitudes[valid], longitudes[valid], width, height)

    if drop_occluded and len(distances):
        hidden = occluded_mask(rows, cols, camera_ranges(cloud, rig), width, height)
        logger.info("Se descartan %d puntos ocultos a la cámara", int(hidden.sum()))
        rows, cols, distances = rows[~hidden], cols[~hidden], distances[~hidden]

    depth = np.full((height, width), np.inf)
    np.minimum.at(depth, (rows, cols), distances)
    depth[np.isinf(depth)] = UNKNOWN_DEPTH
    sparse = SparseDepthMap(depth)
    logger.info("Proyectados %d puntos sobre %d píxeles", len(distances), int(sparse.filled.sum()))
    return sparse


def inverse_project(world, rig):
    """
    Calcula la lectura del LiDAR y la dirección de cámara de un punto del mundo.

    Args:
        world (tuple): Coordenadas (X, Y, Z) en metros.
        rig (RigExtrinsics): Montaje de sensores.

    Returns:
        tuple: (LidarPoint, CameraDirection) del mismo punto.

    Raises:
        DegenerateGeometry: Si el punto coincide con el centro de algún sensor.
    """
    x, y, z = (float(v) for v in world)
    lidar_rel = (x, y, z - rig.lidar_height)
    cam_x, cam_y, cam_z = rig.camera_center
    camera_rel = (x - cam_x, y - cam_y, z - cam_z)
    if math.hypot(*lidar_rel) < DEGENERATE_TOL:
        raise DegenerateGeometry(f"el punto {world} coincide con el centro del LiDAR")
    if math.hypot(*camera_rel) < DEGENERATE_TOL:
        raise DegenerateGeometry(f"el punto {world} coincide con el centro de la cámara")

    lidar_horizontal = math.hypot(lidar_rel[0], lidar_rel[1])
    lidar = LidarPoint(
        math.hypot(*lidar_rel),
        math.atan2(-lidar_rel[2], lidar_horizontal),
        _wrap_longitude(math.atan2(lidar_rel[1], lidar_rel[0])),
    )
    camera_horizontal = math.hypot(camera_rel[0], camera_rel[1])
    camera = CameraDirection(
        math.atan2(-camera_rel[2], camera_horizontal),
        _wrap_longitude(math.atan2(camera_rel[1], camera_rel[0])),
    )
    return lidar, camera


def ground_intersection(latitudes, longitudes, rig, floor_height=0.0):
    """
    Interseca rayos de cámara con el plano del suelo.

    Args:
        latitudes (numpy.ndarray): α de cada rayo.
        longitudes (numpy.ndarray): γ_C de cada rayo.
        rig (RigExtrinsics): Montaje de sensores.
        floor_height (float): Altura del suelo (m).

    Returns:
        tuple: Arreglos (x, y, válido); sólo los rayos por debajo del horizonte
        (α > 0) intersecan el suelo.
    """
    latitudes = np.asarray(latitudes, dtype=np.float64)
    longitudes = np.asarray(longitudes, dtype=np.float64)
    drop = rig.cam_height - floor_height
    valid = latitudes > DEGENERATE_TOL
    tan_lat = np.tan(np.where(valid, latitudes, 1.0))
    horizontal = np.where(valid, drop / tan_lat, np.nan)
    cam_x, cam_y, _ = rig.camera_center
    x = cam_x + horizontal * np.cos(longitudes)
    y = cam_y + horizontal * np.sin(longitudes)
    return x, y, valid
