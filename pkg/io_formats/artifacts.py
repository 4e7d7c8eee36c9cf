"""
Módulo que lee y escribe en disco los artefactos del flujo de trabajo.

Envuelve los codificadores de io_formats.netpbm e io_formats.point_cloud y
traduce entre archivos y los tipos de models. Las mallas de ocupación se
guardan en tres archivos con la misma raíz: el estado (PGM), la confianza
(PFM) y una cabecera clave=valor con la geometría de la malla.
"""

import logging
import os

import numpy as np

from io_formats.config import _collect, parse_config
from io_formats.netpbm import read_pfm, read_pgm, write_pfm, write_pgm
from io_formats.point_cloud import read_point_cloud, write_point_cloud
from models.errors import GridMismatch, ParseError
from models.grid import GridParams, OGMap
from models.maps import DenseDepthMap, FreeSpaceMask, GreyImage, UncertaintyMap

logger = logging.getLogger(__name__)

OGMAP_STATE_SUFFIX = ".pgm"
OGMAP_CONFIDENCE_SUFFIX = "_confidence.pfm"
OGMAP_HEADER_SUFFIX = ".hdr"


def _read_bytes(path):
    with open(path, "rb") as handle:
        return handle.read()


def _write_bytes(path, data):
    with open(path, "wb") as handle:
        handle.write(data)
    logger.debug("Escrito %s (%d bytes)", path, len(data))


def _read_text(path):
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_text(path, text):
    # newline="" mantiene los mismos bytes en cualquier plataforma
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    logger.debug("Escrito %s", path)


def load_grey(path):
    """
    Lee una imagen en niveles de gris desde un PGM.

    Returns:
        GreyImage: Imagen normalizada a [0, 1].
    """
    return GreyImage.from_bytes(read_pgm(_read_bytes(path)))


def save_grey(path, image):
    _write_bytes(path, write_pgm(image.to_bytes()))


def load_mask(path):
    """
    Lee una máscara de espacio libre desde un PGM.

    Raises:
        RangeError: Si el archivo contiene bytes distintos de 0, 128 y 255.
    """
    return FreeSpaceMask(read_pgm(_read_bytes(path)))


def save_mask(path, mask):
    _write_bytes(path, write_pgm(mask.labels))


def load_depth(path, known_path=None):
    """
    Lee un mapa de profundidad desde un PFM.

    Args:
        path (str): Archivo PFM con el centinela −1 en los píxeles desconocidos.
        known_path (str): PGM opcional con 255 en los píxeles conocidos; sin él
            se consideran conocidos los píxeles con profundidad positiva.

    Returns:
        DenseDepthMap: Mapa leído.
    """
    depth = read_pfm(_read_bytes(path)).astype(np.float64)
    known = None
    if known_path is not None:
        known = read_pgm(_read_bytes(known_path)) == 255
    return DenseDepthMap(depth, known)


def save_depth(path, depth, known_path=None):
    """
    Escribe un mapa de profundidad en PFM y, si se pide, la máscara de conocidos.

    Args:
        path (str): Destino del PFM.
        depth (DenseDepthMap): Mapa a escribir.
        known_path (str): Destino opcional del PGM de píxeles conocidos.
    """
    _write_bytes(path, write_pfm(depth.depth))
    if known_path is not None:
        _write_bytes(known_path, write_pgm(np.where(depth.known, 255, 0).astype(np.uint8)))


def load_variance(path):
    return UncertaintyMap(read_pfm(_read_bytes(path)).astype(np.float64))


def save_variance(path, uncertainty):
    _write_bytes(path, write_pfm(uncertainty.variance))


def load_cloud(path):
    """
    Lee una nube de puntos en formato de texto.

    Returns:
        PointCloud: Nube leída.
    """
    return read_point_cloud(_read_text(path))


def save_cloud(path, cloud):
    _write_text(path, write_point_cloud(cloud))


def _ogmap_header(params):
    return (f"cell_size={params.cell_size!r}\n"
            f"extent_x={params.extent_x!r}\n"
            f"extent_y={params.extent_y!r}\n"
            f"origin_row={params.origin_row}\n"
            f"origin_col={params.origin_col}\n")


def write_ogmap(stem, ogmap):
    """
    Escribe una malla de ocupación como tres archivos con la misma raíz.

    Args:
        stem (str): Ruta sin extensión; se escriben stem.pgm,
            stem_confidence.pfm y stem.hdr.
        ogmap (OGMap): Malla a escribir.

    Returns:
        list: Rutas escritas.
    """
    paths = [stem + OGMAP_STATE_SUFFIX, stem + OGMAP_CONFIDENCE_SUFFIX, stem + OGMAP_HEADER_SUFFIX]
    _write_bytes(paths[0], write_pgm(ogmap.state))
    _write_bytes(paths[1], write_pfm(ogmap.confidence))
    _write_text(paths[2], _ogmap_header(ogmap.params))
    return paths


def read_ogmap(stem):
    """
    Lee una malla de ocupación escrita por write_ogmap.

    Args:
        stem (str): Ruta sin extensión.

    Returns:
        OGMap: Malla leída.

    Raises:
        ParseError: Si falta alguna clave de la cabecera.
        GridMismatch: Si el origen o las dimensiones no coinciden con la geometría.
    """
    document = parse_config(_read_text(stem + OGMAP_HEADER_SUFFIX), "ogmap")
    for key in ("cell_size", "extent_x", "extent_y"):
        if key not in document:
            raise ParseError(f"falta la clave {key} en la cabecera de la malla", field=key)
    params = GridParams(**_collect(document, {
        "cell_size": ("cell_size", float),
        "extent_x": ("extent_x", float),
        "extent_y": ("extent_y", float),
    }, {}))
    if "origin_row" in document and document.get_int("origin_row") != params.origin_row:
        raise GridMismatch("origin_row no coincide con la geometría de la malla")
    if "origin_col" in document and document.get_int("origin_col") != params.origin_col:
        raise GridMismatch("origin_col no coincide con la geometría de la malla")
    state = read_pgm(_read_bytes(stem + OGMAP_STATE_SUFFIX))
    confidence = read_pfm(_read_bytes(stem + OGMAP_CONFIDENCE_SUFFIX)).astype(np.float64)
    return OGMap(params, state, np.clip(confidence, 0.0, 1.0))


def output_path(directory, name):
    """
    Une el directorio de salida y el nombre del artefacto, creando el directorio.
    """
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, name)
