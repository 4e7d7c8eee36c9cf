"""
Módulo que interpreta los archivos de configuración clave=valor.

Cada archivo pertenece a una sección (rig, gp, grid, scene u ogmap) con un
conjunto cerrado de claves. Las claves desconocidas o repetidas son un error
que nombra la clave y la línea. Precedencia: valores por defecto < archivo <
opciones de la línea de comandos.
"""

import logging
import math
from dataclasses import dataclass, field

from models.errors import ConfigError
from models.grid import GridParams
from models.params import FreeSpaceParams, GpParams
from models.sensors import RigExtrinsics

logger = logging.getLogger(__name__)

SECTION_KEYS = {
    "rig": ("cam_height", "lidar_height", "frontal_offset", "lateral_offset",
            "lidar_vfov_halfangle_deg", "lidar_max_range"),
    "gp": ("k_p", "k_l", "noise_variance", "patch_size", "patch_overlap",
           "min_train_points", "signal_scale"),
    "grid": ("cell_size", "extent_x", "extent_y", "height_tol", "unc_tol", "max_depth"),
    "scene": ("floor_height", "floor_intensity", "background_intensity", "image_width",
              "image_height", "lidar_channels", "lidar_azimuth_step_deg", "lidar_max_range",
              "range_noise_std", "noise_seed", "box"),
    "ogmap": ("cell_size", "extent_x", "extent_y", "origin_row", "origin_col"),
}

# Claves que pueden aparecer varias veces
REPEATABLE_KEYS = {"scene": ("box",)}


@dataclass
class ConfigDocument:
    """
    Documento de configuración de una sección.

    Attributes:
        section (str): Nombre de la sección.
        values (dict): Clave → valor en texto, en orden de aparición.
        repeated (dict): Clave repetible → lista de pares (valor en texto, línea).
        lines (dict): Clave → número de línea donde aparece.
    """

    section: str
    values: dict = field(default_factory=dict)
    repeated: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)

    def get_float(self, key):
        return _convert(self, key, float)

    def get_int(self, key):
        return _convert(self, key, int)

    def get_all(self, key):
        return list(self.repeated.get(key, []))

    def __contains__(self, key):
        return key in self.values


def _convert(document, key, kind):
    text = document.values[key]
    try:
        value = kind(text)
    except ValueError:
        raise ConfigError(f"valor inválido para {key}: {text!r}",
                          line=document.lines.get(key), field=key) from None
    if isinstance(value, float) and not math.isfinite(value):
        raise ConfigError(f"valor no finito para {key}: {text!r}",
                          line=document.lines.get(key), field=key)
    return value


def parse_config(text, section):
    """
    Interpreta el texto de un archivo de configuración.

    Args:
        text (str): Contenido del archivo.
        section (str): Sección que define las claves válidas.

    Returns:
        ConfigDocument: Documento con los valores en texto.

    Raises:
        ConfigError: Si una línea no es clave=valor o la clave es desconocida o repetida.
    """
    if section not in SECTION_KEYS:
        raise ConfigError(f"sección desconocida: {section}", field=section)
    allowed = SECTION_KEYS[section]
    repeatable = REPEATABLE_KEYS.get(section, ())
    document = ConfigDocument(section)
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"se esperaba clave=valor: {raw.strip()!r}", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in allowed:
            raise ConfigError(f"clave desconocida en la sección {section}: {key}",
                              line=number, field=key)
        if key in repeatable:
            document.repeated.setdefault(key, []).append((value, number))
            continue
        if key in document.values:
            raise ConfigError(f"clave repetida: {key}", line=number, field=key)
        document.values[key] = value
        document.lines[key] = number
    logger.debug("Configuración %s: %d claves", section, len(document.values))
    return document


def _radians(text):
    return math.radians(float(text))


def _collect(document, conversions, overrides):
    """
    Mezcla los valores del documento con las opciones explícitas.

    Returns:
        dict: Argumentos para el constructor, sin las claves ausentes.
    """
    kwargs = {}
    if document is not None:
        for key, (target, kind) in conversions.items():
            if key in document:
                kwargs[target] = _convert(document, key, kind)
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    return kwargs


def rig_from_config(document=None, **overrides):
    """
    Construye el montaje de sensores desde un documento de la sección rig.

    Args:
        document (ConfigDocument): Documento leído, o None para los valores por defecto.
        **overrides: Valores explícitos con los nombres de RigExtrinsics; None se ignora.

    Returns:
        RigExtrinsics: Montaje validado.
    """
    conversions = {
        "cam_height": ("cam_height", float),
        "lidar_height": ("lidar_height", float),
        "frontal_offset": ("frontal_offset", float),
        "lateral_offset": ("lateral_offset", float),
        "lidar_vfov_halfangle_deg": ("lidar_vfov_halfangle", _radians),
        "lidar_max_range": ("lidar_max_range", float),
    }
    return RigExtrinsics(**_collect(document, conversions, overrides))


def gp_from_config(document=None, **overrides):
    """
    Construye los parámetros del proceso gaussiano desde la sección gp.

    Returns:
        GpParams: Parámetros validados.
    """
    conversions = {
        "k_p": ("k_p", float),
        "k_l": ("k_l", float),
        "noise_variance": ("noise_variance", float),
        "patch_size": ("patch_size", int),
        "patch_overlap": ("patch_overlap", int),
        "min_train_points": ("min_train_points", int),
        "signal_scale": ("signal_scale", float),
    }
    return GpParams(**_collect(document, conversions, overrides))


def grid_from_config(document=None, **overrides):
    """
    Construye la malla y los umbrales de espacio libre desde la sección grid.

    Returns:
        tuple: (GridParams, FreeSpaceParams).
    """
    grid_conversions = {
        "cell_size": ("cell_size", float),
        "extent_x": ("extent_x", float),
        "extent_y": ("extent_y", float),
    }
    freespace_conversions = {
        "height_tol": ("height_tol", float),
        "unc_tol": ("unc_tol", float),
        "max_depth": ("max_depth", float),
    }
    grid_overrides = {k: v for k, v in overrides.items() if k in ("cell_size", "extent_x", "extent_y")}
    freespace_overrides = {k: v for k, v in overrides.items() if k not in grid_overrides}
    return (GridParams(**_collect(document, grid_conversions, grid_overrides)),
            FreeSpaceParams(**_collect(document, freespace_conversions, freespace_overrides)))


def read_config(path, section):
    """
    Lee un archivo de configuración del disco.

    Raises:
        OSError: Si el archivo no se puede leer.
        ConfigError: Si el contenido no es válido.
    """
    with open(path, "r", encoding="utf-8") as handle:
        return parse_config(handle.read(), section)
