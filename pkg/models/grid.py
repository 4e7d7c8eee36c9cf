"""
Módulo que define la malla de ocupación 2-D sobre el plano del suelo.

La malla cubre extent_x metros hacia delante y extent_y metros de ancho. La
fila 0 es la más lejana; el robot (el punto del suelo bajo el LiDAR) ocupa la
celda central de la última fila. Las columnas avanzan de izquierda (y > 0) a
derecha (y < 0), como se ve la malla desde arriba mirando hacia delante.
"""

from dataclasses import dataclass, field

import numpy as np

from models.errors import GridMismatch, RangeError
from models.maps import Label


@dataclass(frozen=True)
class GridParams:
    """
    Geometría de la malla de ocupación.

    Attributes:
        cell_size (float): Lado de cada celda (m).
        extent_x (float): Alcance frontal cubierto (m).
        extent_y (float): Ancho lateral cubierto (m).
    """

    cell_size: float = 0.1
    extent_x: float = 20.0
    extent_y: float = 20.0

    def __post_init__(self):
        if not self.cell_size > 0:
            raise RangeError(f"cell_size debe ser positivo: {self.cell_size}")
        if not (self.extent_x >= self.cell_size and self.extent_y >= self.cell_size):
            raise RangeError("la extensión de la malla debe cubrir al menos una celda")

    @property
    def n_rows(self):
        return int(round(self.extent_x / self.cell_size))

    @property
    def n_cols(self):
        return int(round(self.extent_y / self.cell_size))

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @property
    def origin_row(self):
        return self.n_rows - 1

    @property
    def origin_col(self):
        return self.n_cols // 2

    def world_to_cell(self, x, y):
        """
        Convierte coordenadas de mundo en índices de celda.

        Args:
            x (numpy.ndarray): Coordenadas frontales (m).
            y (numpy.ndarray): Coordenadas laterales (m), positivas a la izquierda.

        Returns:
            tuple: (filas, columnas, dentro) donde dentro marca las celdas válidas.
        """
        ix = np.floor(np.asarray(x, dtype=np.float64) / self.cell_size + 0.5).astype(np.int64)
        iy = np.floor(np.asarray(y, dtype=np.float64) / self.cell_size + 0.5).astype(np.int64)
        rows = self.origin_row - ix
        cols = self.origin_col - iy
        inside = (rows >= 0) & (rows < self.n_rows) & (cols >= 0) & (cols < self.n_cols)
        return rows, cols, inside

    def cell_centers(self):
        """
        Coordenadas de mundo del centro de cada celda.

        Returns:
            tuple: Arreglos (x, y) con forma (n_rows, n_cols).
        """
        rows, cols = np.indices(self.shape)
        x = (self.origin_row - rows) * self.cell_size
        y = (self.origin_col - cols) * self.cell_size
        return x.astype(np.float64), y.astype(np.float64)


@dataclass
class OGMap:
    """
    Malla de ocupación con estado y confianza por celda.

    Attributes:
        params (GridParams): Geometría de la malla.
        state (numpy.ndarray): Valores de Label (uint8) por celda.
        confidence (numpy.ndarray): Confianza en [0, 1] por celda; 0 en las desconocidas.
    """

    params: GridParams = field(default_factory=GridParams)
    state: np.ndarray = None
    confidence: np.ndarray = None

    def __post_init__(self):
        if self.state is None:
            self.state = np.full(self.params.shape, int(Label.UNKNOWN), dtype=np.uint8)
        self.state = np.asarray(self.state, dtype=np.uint8)
        if self.state.shape != self.params.shape:
            raise GridMismatch(
                f"el estado tiene forma {self.state.shape}, la malla {self.params.shape}")
        if self.confidence is None:
            self.confidence = np.where(self.state == Label.UNKNOWN, 0.0, 1.0)
        self.confidence = np.asarray(self.confidence, dtype=np.float64)
        if self.confidence.shape != self.params.shape:
            raise GridMismatch("la confianza no coincide con la malla")
        if np.any((self.confidence < 0) | (self.confidence > 1)):
            raise RangeError("la confianza debe estar en [0, 1]")
        self.confidence = np.where(self.state == Label.UNKNOWN, 0.0, self.confidence)

    @classmethod
    def from_votes(cls, params, free, occupied):
        """
        Construye la malla a partir de votos booleanos; la ocupación prevalece.

        Args:
            params (GridParams): Geometría de la malla.
            free (numpy.ndarray): Celdas con evidencia de espacio libre.
            occupied (numpy.ndarray): Celdas con evidencia de obstáculo.

        Returns:
            OGMap: Malla con confianza 1 en las celdas decididas.
        """
        state = np.full(params.shape, int(Label.UNKNOWN), dtype=np.uint8)
        state[free] = Label.FREE
        state[occupied] = Label.OCCUPIED
        return cls(params, state)

    @property
    def free(self):
        return self.state == Label.FREE

    @property
    def occupied(self):
        return self.state == Label.OCCUPIED

    @property
    def unknown(self):
        return self.state == Label.UNKNOWN

    @property
    def decided(self):
        return self.state != Label.UNKNOWN


def check_same_grid(*maps):
    """
    Verifica que todas las mallas compartan geometría.

    Raises:
        GridMismatch: Si alguna difiere.
    """
    first = maps[0].params
    for other in maps[1:]:
        if other.params != first or other.state.shape != maps[0].state.shape:
            raise GridMismatch("las mallas de ocupación no comparten geometría")
