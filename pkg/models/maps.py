"""
Módulo que define los mapas alineados con la imagen.

Todos los mapas comparten la rejilla de la imagen equirectangular: arreglos
de numpy con forma (alto, ancho). La profundidad desconocida se codifica con
el centinela UNKNOWN_DEPTH, el mismo que se escribe en los archivos PFM.
"""

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from models.errors import DimensionMismatch, RangeError

# Centinela de profundidad vacía o desconocida
UNKNOWN_DEPTH = -1.0


class Label(IntEnum):
    """
    Etiquetas de espacio libre; el valor coincide con el byte escrito en PGM.
    """

    OCCUPIED = 0
    UNKNOWN = 128
    FREE = 255


def _as_2d(array, dtype):
    array = np.asarray(array, dtype=dtype)
    if array.ndim != 2:
        raise RangeError(f"se esperaba un arreglo 2-D, se recibió forma {array.shape}")
    return array


def check_same_shape(*maps):
    """
    Verifica que todos los mapas compartan dimensiones.

    Args:
        *maps: Objetos con atributo shape.

    Raises:
        DimensionMismatch: Si alguna forma difiere.
    """
    shapes = {tuple(m.shape) for m in maps}
    if len(shapes) > 1:
        raise DimensionMismatch(f"dimensiones incompatibles: {sorted(shapes)}")


@dataclass
class GreyImage:
    """
    Imagen en niveles de gris normalizados a [0, 1].

    Attributes:
        intensity (numpy.ndarray): Intensidades I_x, forma (alto, ancho).
    """

    intensity: np.ndarray

    def __post_init__(self):
        self.intensity = _as_2d(self.intensity, np.float64)
        if self.intensity.size and (self.intensity.min() < 0.0 or self.intensity.max() > 1.0):
            raise RangeError("las intensidades deben estar en [0, 1]")

    @classmethod
    def from_bytes(cls, pixels):
        """
        Crea la imagen a partir de bytes de 8 bits (0-255).

        Args:
            pixels (numpy.ndarray): Arreglo uint8.

        Returns:
            GreyImage: Imagen normalizada dividiendo entre 255.
        """
        return cls(np.asarray(pixels, dtype=np.float64) / 255.0)

    def to_bytes(self):
        """
        Cuantiza la imagen a 8 bits con redondeo hacia arriba en el medio.

        Returns:
            numpy.ndarray: Arreglo uint8.
        """
        return np.floor(self.intensity * 255.0 + 0.5).astype(np.uint8)

    @property
    def shape(self):
        return self.intensity.shape

    @property
    def height(self):
        return self.intensity.shape[0]

    @property
    def width(self):
        return self.intensity.shape[1]


@dataclass
class SparseDepthMap:
    """
    Mapa de profundidad con valores solo en los píxeles alcanzados por el LiDAR.

    Attributes:
        depth (numpy.ndarray): Distancia D (m) o UNKNOWN_DEPTH en píxeles vacíos.
    """

    depth: np.ndarray

    def __post_init__(self):
        self.depth = _as_2d(self.depth, np.float64)
        filled = self.depth > 0
        if np.any(~np.isfinite(self.depth[filled])):
            raise RangeError("los píxeles con profundidad deben ser finitos")
        self.depth = np.where(filled, self.depth, UNKNOWN_DEPTH)

    @classmethod
    def empty(cls, height, width):
        return cls(np.full((height, width), UNKNOWN_DEPTH))

    @property
    def filled(self):
        """Máscara booleana de píxeles con profundidad."""
        return self.depth > 0

    @property
    def shape(self):
        return self.depth.shape

    def window(self, row0, col0, size_rows, size_cols):
        """
        Extrae una ventana rectangular del mapa.

        Returns:
            SparseDepthMap: Copia de la ventana.
        """
        return SparseDepthMap(self.depth[row0:row0 + size_rows, col0:col0 + size_cols].copy())


@dataclass
class DenseDepthMap:
    """
    Mapa de profundidad denso tras la igualación de resolución.

    Attributes:
        depth (numpy.ndarray): Media posterior μ* (m); UNKNOWN_DEPTH donde no hay soporte.
        known (numpy.ndarray): Máscara booleana de píxeles con estimación.
            Todo píxel conocido tiene profundidad positiva y finita.
    """

    depth: np.ndarray
    known: np.ndarray = None

    def __post_init__(self):
        self.depth = _as_2d(self.depth, np.float64)
        if self.known is None:
            self.known = self.depth > 0
        self.known = _as_2d(self.known, bool)
        check_same_shape(self.depth, self.known)
        known_depth = self.depth[self.known]
        if np.any(~np.isfinite(known_depth)) or np.any(known_depth <= 0):
            raise RangeError("los píxeles conocidos deben tener profundidad positiva y finita")
        self.depth = np.where(self.known, self.depth, UNKNOWN_DEPTH)

    @property
    def shape(self):
        return self.depth.shape


@dataclass
class UncertaintyMap:
    """
    Varianza posterior por píxel.

    Attributes:
        variance (numpy.ndarray): Σ* (m²), no negativa en todos los píxeles.
    """

    variance: np.ndarray

    def __post_init__(self):
        self.variance = _as_2d(self.variance, np.float64)
        if np.any(self.variance < 0):
            raise RangeError("la varianza no puede ser negativa")

    @property
    def shape(self):
        return self.variance.shape


@dataclass
class FreeSpaceMask:
    """
    Máscara de espacio libre por píxel.

    Attributes:
        labels (numpy.ndarray): Valores de Label (uint8), forma (alto, ancho).
    """

    labels: np.ndarray

    def __post_init__(self):
        self.labels = _as_2d(self.labels, np.uint8)
        valid = np.isin(self.labels, [int(label) for label in Label])
        if not np.all(valid):
            raise RangeError("la máscara contiene valores distintos de 0, 128 y 255")

    @classmethod
    def filled_with(cls, shape, label):
        return cls(np.full(shape, int(label), dtype=np.uint8))

    @property
    def shape(self):
        return self.labels.shape

    @property
    def free(self):
        return self.labels == Label.FREE

    @property
    def occupied(self):
        return self.labels == Label.OCCUPIED

    @property
    def unknown(self):
        return self.labels == Label.UNKNOWN
