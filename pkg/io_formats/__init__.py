"""
Paquete que contiene los lectores y escritores de archivos.

Incluye nubes de puntos en texto, imágenes PGM, mapas PFM, archivos de
configuración y de escena, y los artefactos del flujo de trabajo.
"""

from io_formats.artifacts import (load_cloud, load_depth, load_grey, load_mask, load_variance,
                                  output_path, read_ogmap, save_cloud, save_depth, save_grey,
                                  save_mask, save_variance, write_ogmap)
from io_formats.config import (ConfigDocument, gp_from_config, grid_from_config, parse_config,
                               read_config, rig_from_config)
from io_formats.netpbm import read_pfm, read_pgm, write_pfm, write_pgm
from io_formats.point_cloud import read_point_cloud, write_point_cloud
from io_formats.scene_file import read_scene, scene_from_document

__all__ = [
    'ConfigDocument', 'gp_from_config', 'grid_from_config', 'load_cloud', 'load_depth',
    'load_grey', 'load_mask', 'load_variance', 'output_path', 'parse_config', 'read_config',
    'read_ogmap', 'read_pfm', 'read_pgm', 'read_point_cloud', 'read_scene', 'rig_from_config',
    'save_cloud', 'save_depth', 'save_grey', 'save_mask', 'save_variance', 'scene_from_document',
    'write_ogmap', 'write_pfm', 'write_pgm', 'write_point_cloud',
]
