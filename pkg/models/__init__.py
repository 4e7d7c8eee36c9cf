"""
Paquete que contiene los modelos de datos de la fusión LiDAR + cámara.

Este paquete define el montaje de sensores, las nubes de puntos, los mapas
alineados con la imagen, las mallas de ocupación, las escenas sintéticas,
los parámetros ajustables y la jerarquía de errores.
"""

from models.errors import (
    ConfigError,
    DegenerateGeometry,
    DegenerateLabels,
    DimensionMismatch,
    EmptyCloud,
    EmptyMap,
    EmptyValidSet,
    FusionError,
    GridMismatch,
    ParseError,
    RangeError,
    SingularKernel,
)
from models.grid import GridParams, OGMap, check_same_grid
from models.maps import (
    UNKNOWN_DEPTH,
    DenseDepthMap,
    FreeSpaceMask,
    GreyImage,
    Label,
    SparseDepthMap,
    UncertaintyMap,
    check_same_shape,
)
from models.params import FreeSpaceParams, GpParams
from models.scene import Box, LidarScanSpec, Scene
from models.sensors import CameraDirection, LidarPoint, PixelCoord, PointCloud, RigExtrinsics

__all__ = [
    'Box', 'CameraDirection', 'ConfigError', 'DegenerateGeometry', 'DegenerateLabels',
    'DenseDepthMap', 'DimensionMismatch', 'EmptyCloud', 'EmptyMap', 'EmptyValidSet',
    'FreeSpaceMask', 'FreeSpaceParams', 'FusionError', 'GpParams', 'GreyImage',
    'GridMismatch', 'GridParams', 'Label', 'LidarPoint', 'LidarScanSpec', 'OGMap',
    'ParseError', 'PixelCoord', 'PointCloud', 'RangeError', 'RigExtrinsics', 'Scene',
    'SingularKernel', 'SparseDepthMap', 'UNKNOWN_DEPTH', 'UncertaintyMap',
    'check_same_grid', 'check_same_shape',
]
