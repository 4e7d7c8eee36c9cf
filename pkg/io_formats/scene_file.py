"""
Módulo que interpreta los archivos de descripción de escenas sintéticas.

Usa el formato clave=valor de la sección scene, con una entrada repetible
box=xmin,ymin,zmin,xmax,ymax,zmax,intensidad por cada caja.
"""

import math

from io_formats.config import _collect, parse_config
from models.errors import ConfigError, RangeError
from models.scene import Box, LidarScanSpec, Scene


def _parse_box(value, line):
    fields = [part.strip() for part in value.split(",")]
    if len(fields) != 7:
        raise ConfigError(f"box necesita 7 valores y tiene {len(fields)}", line=line, field="box")
    try:
        numbers = [float(part) for part in fields]
    except ValueError:
        raise ConfigError(f"box con valores no numéricos: {value!r}", line=line, field="box") from None
    try:
        return Box(tuple(numbers[:3]), tuple(numbers[3:6]), numbers[6])
    except RangeError as error:
        raise ConfigError(str(error), line=line, field="box") from None


def _degrees(text):
    return math.radians(float(text))


def scene_from_document(document, vfov_halfangle=math.radians(15.0)):
    """
    Construye una escena a partir de un documento de la sección scene.

    Args:
        document (ConfigDocument): Documento leído.
        vfov_halfangle (float): Semiapertura vertical del LiDAR simulado (rad).

    Returns:
        Scene: Escena validada.
    """
    scene_kwargs = _collect(document, {
        "floor_height": ("floor_height", float),
        "floor_intensity": ("floor_intensity", float),
        "background_intensity": ("background_intensity", float),
        "image_width": ("image_width", int),
        "image_height": ("image_height", int),
        "range_noise_std": ("range_noise_std", float),
        "noise_seed": ("noise_seed", int),
    }, {})
    scan_kwargs = _collect(document, {
        "lidar_channels": ("channels", int),
        "lidar_azimuth_step_deg": ("azimuth_step", _degrees),
        "lidar_max_range": ("max_range", float),
    }, {})
    boxes = tuple(_parse_box(value, line) for value, line in document.get_all("box"))
    scan = LidarScanSpec(vfov_halfangle=vfov_halfangle, **scan_kwargs)
    return Scene(boxes=boxes, scan=scan, **scene_kwargs)


def read_scene(text, vfov_halfangle=math.radians(15.0)):
    """
    Interpreta el texto de un archivo de escena.

    Args:
        text (str): Contenido del archivo.
        vfov_halfangle (float): Semiapertura vertical del LiDAR simulado (rad).

    Returns:
        Scene: Escena descrita.

    Raises:
        ConfigError: Si alguna línea o caja está mal formada.
        RangeError: Si algún valor viola los invariantes de la escena.
    """
    return scene_from_document(parse_config(text, "scene"), vfov_halfangle)
