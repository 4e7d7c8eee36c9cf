"""
Módulo que detecta el espacio libre a partir de la profundidad fusionada.

Un píxel es espacio libre cuando el punto que representa está al mismo nivel
que la base de las ruedas, es decir, sobre el plano del suelo.
"""

import logging

import numpy as np

from geometry.sensor_geometry import image_directions
from models.maps import FreeSpaceMask, Label, check_same_shape
from models.params import FreeSpaceParams

logger = logging.getLogger(__name__)

_DEFAULTS = FreeSpaceParams()


def reconstruct_heights(dense, rig):
    """
    Altura de mundo del punto observado en cada píxel con profundidad.

    El rayo del píxel se recorre hasta la distancia frontal D guardada y se
    lee la altura alcanzada.

    Args:
        dense (DenseDepthMap): Profundidad fusionada.
        rig (RigExtrinsics): Montaje de sensores.

    Returns:
        numpy.ndarray: Alturas (m); NaN donde la geometría no lo permite.
    """
    heights, _ = _heights_and_deviations(dense, None, rig)
    return heights


def height_deviations(dense, unc, rig):
    """
    Desviación típica de la altura reconstruida en cada píxel.

    Propaga a la altura la varianza posterior de D y la cuantización del
    píxel (medio píxel en latitud y en longitud), que separa la dirección
    real de cada retorno del centro del píxel que lo guarda.

    Args:
        dense (DenseDepthMap): Profundidad fusionada.
        unc (UncertaintyMap): Varianza posterior.
        rig (RigExtrinsics): Montaje de sensores.

    Returns:
        numpy.ndarray: σ_h (m); NaN donde la altura no está definida.
    """
    check_same_shape(dense, unc)
    _, deviations = _heights_and_deviations(dense, unc, rig)
    return deviations


def _heights_and_deviations(dense, unc, rig):
    height, width = dense.shape
    latitudes, longitudes = image_directions(width, height)
    cos_lon = np.cos(longitudes)
    usable = dense.known & (np.abs(cos_lon) > 1e-9) & (np.abs(latitudes) < np.pi / 2 - 1e-9)
    safe_cos = np.where(usable, cos_lon, 1.0)
    horizontal = np.where(usable, (dense.depth - rig.frontal_offset) / safe_cos, np.nan)
    usable &= horizontal > 0
    tan_lat = np.tan(latitudes)
    heights = np.where(usable, rig.cam_height - horizontal * tan_lat, np.nan)
    if unc is None:
        return heights, None

    half_row = np.pi / (2.0 * (height - 1)) if height > 1 else 0.0
    half_col = np.pi / (width - 1) if width > 1 else 0.0
    from_depth = tan_lat / safe_cos
    from_latitude = horizontal / np.cos(latitudes) ** 2 * half_row
    from_longitude = horizontal * tan_lat * np.tan(longitudes) * half_col
    variance = (from_depth ** 2 * unc.variance + from_latitude ** 2 + from_longitude ** 2)
    return heights, np.where(usable, np.sqrt(variance), np.nan)


def ground_mask_from_depth(dense, unc, rig, height_tol=_DEFAULTS.height_tol,
                           unc_tol=_DEFAULTS.unc_tol, max_depth=_DEFAULTS.max_depth,
                           floor_height=0.0, strict=False):
    """
    Etiqueta cada píxel según la altura de su punto respecto al suelo.

    Con strict=True una etiqueta sólo se asigna si se mantiene a una
    desviación típica de altura (height_deviations) del umbral: libre si
    |h| + σ_h ≤ height_tol y ocupado si h − σ_h > height_tol. Es la máscara
    que se fusiona con la del clasificador de imagen.

    Args:
        dense (DenseDepthMap): Profundidad fusionada.
        unc (UncertaintyMap): Varianza posterior.
        rig (RigExtrinsics): Montaje de sensores.
        height_tol (float): Tolerancia de altura (m).
        unc_tol (float): Varianza máxima para decidir (m²).
        max_depth (float): Profundidad máxima evaluada (m).
        floor_height (float): Altura del suelo (m).
        strict (bool): Exige el margen de una desviación típica.

    Returns:
        FreeSpaceMask: Libre al nivel del suelo, ocupado por encima de la
        tolerancia y desconocido en el resto.

    Raises:
        DimensionMismatch: Si los mapas no comparten dimensiones.
    """
    check_same_shape(dense, unc)
    heights, deviations = _heights_and_deviations(dense, unc, rig)
    heights = heights - floor_height
    if not strict:
        deviations = np.zeros(dense.shape)
    decided = (np.isfinite(heights) & (unc.variance <= unc_tol)
               & (dense.depth <= max_depth))
    labels = np.full(dense.shape, int(Label.UNKNOWN), dtype=np.uint8)
    with np.errstate(invalid="ignore"):
        labels[decided & (np.abs(heights) + deviations <= height_tol)] = Label.FREE
        labels[decided & (heights - deviations > height_tol)] = Label.OCCUPIED
    mask = FreeSpaceMask(labels)
    logger.info("Máscara por profundidad%s: %d libres, %d ocupados, %d desconocidos",
                " estricta" if strict else "", int(mask.free.sum()),
                int(mask.occupied.sum()), int(mask.unknown.sum()))
    return mask


def fuse_free_masks(depth_mask, image_mask):
    """
    Fusiona la máscara por profundidad con la del clasificador de imagen.

    Las etiquetas decididas por la profundidad prevalecen; la imagen rellena
    los píxeles donde la profundidad no decide.

    Args:
        depth_mask (FreeSpaceMask): Máscara de ground_mask_from_depth.
        image_mask (FreeSpaceMask): Máscara de classify_image.

    Returns:
        FreeSpaceMask: Máscara fusionada.

    Raises:
        DimensionMismatch: Si las máscaras no comparten dimensiones.
    """
    check_same_shape(depth_mask, image_mask)
    labels = np.where(depth_mask.unknown, image_mask.labels, depth_mask.labels)
    return FreeSpaceMask(labels.astype(np.uint8))
