"""
Módulo que define las escenas sintéticas usadas como oráculo.

Una escena es un suelo plano infinito más una lista de cajas alineadas con
los ejes, cada una con su nivel de gris. La escena también fija la
resolución de la cámara y el patrón de barrido del LiDAR simulado.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from models.errors import RangeError


def _check_intensity(name, value):
    if not 0.0 <= value <= 1.0:
        raise RangeError(f"{name} debe estar en [0, 1]: {value}")


@dataclass(frozen=True)
class Box:
    """
    Caja alineada con los ejes del mundo.

    Attributes:
        min_corner (tuple): (xmin, ymin, zmin) en metros.
        max_corner (tuple): (xmax, ymax, zmax) en metros.
        intensity (float): Nivel de gris de sus caras, en [0, 1].
    """

    min_corner: tuple
    max_corner: tuple
    intensity: float = 0.85

    def __post_init__(self):
        object.__setattr__(self, "min_corner", tuple(float(v) for v in self.min_corner))
        object.__setattr__(self, "max_corner", tuple(float(v) for v in self.max_corner))
        if len(self.min_corner) != 3 or len(self.max_corner) != 3:
            raise RangeError("las esquinas de la caja deben tener tres coordenadas")
        if any(hi <= lo for lo, hi in zip(self.min_corner, self.max_corner)):
            raise RangeError(f"la caja debe tener volumen positivo: {self.min_corner} {self.max_corner}")
        _check_intensity("intensity", self.intensity)

    def contains_xy(self, x, y):
        """
        Indica qué puntos del suelo caen bajo la huella de la caja.

        Returns:
            numpy.ndarray: Máscara booleana.
        """
        return ((x >= self.min_corner[0]) & (x <= self.max_corner[0])
                & (y >= self.min_corner[1]) & (y <= self.max_corner[1]))


@dataclass(frozen=True)
class LidarScanSpec:
    """
    Patrón de barrido del LiDAR simulado.

    Attributes:
        channels (int): Número de haces.
        vfov_halfangle (float): Semiapertura vertical (rad).
        azimuth_step (float): Paso angular horizontal (rad).
        max_range (float): Alcance máximo (m).
        elevations (tuple): Latitudes β de cada haz (rad); por defecto equiespaciadas
            en ±vfov_halfangle.
    """

    channels: int = 16
    vfov_halfangle: float = math.radians(15.0)
    azimuth_step: float = math.radians(0.2)
    max_range: float = 100.0
    elevations: tuple = None

    def __post_init__(self):
        if self.channels < 1:
            raise RangeError("el LiDAR necesita al menos un canal")
        if not self.azimuth_step > 0:
            raise RangeError("azimuth_step debe ser positivo")
        if not self.max_range > 0:
            raise RangeError("max_range debe ser positivo")
        if self.elevations is None:
            if self.channels == 1:
                angles = (0.0,)
            else:
                angles = tuple(float(a) for a in np.linspace(
                    -self.vfov_halfangle, self.vfov_halfangle, self.channels))
            object.__setattr__(self, "elevations", angles)
        else:
            object.__setattr__(self, "elevations", tuple(float(a) for a in self.elevations))
        if len(self.elevations) != self.channels:
            raise RangeError("el número de elevaciones no coincide con los canales")
        if any(abs(a) > self.vfov_halfangle + 1e-12 for a in self.elevations):
            raise RangeError("hay elevaciones fuera de la apertura vertical")

    def azimuths(self):
        """
        Longitudes γ_L del barrido, en (−π, π] e incluyendo exactamente 0.

        Returns:
            numpy.ndarray: Longitudes en radianes.
        """
        count = max(1, int(round(2.0 * math.pi / self.azimuth_step)))
        steps = np.arange(-(count // 2) + 1, count - count // 2 + 1, dtype=np.float64)
        azimuths = steps * self.azimuth_step
        azimuths = np.where(azimuths > math.pi, azimuths - 2.0 * math.pi, azimuths)
        return np.where(azimuths <= -math.pi, azimuths + 2.0 * math.pi, azimuths)


@dataclass(frozen=True)
class Scene:
    """
    Mundo analítico: suelo plano más cajas.

    Attributes:
        floor_height (float): Altura del suelo (m), 0 por convención.
        floor_intensity (float): Nivel de gris del suelo.
        background_intensity (float): Nivel de gris de los rayos que no chocan con nada.
        boxes (tuple): Cajas Box de la escena.
        image_width (int): Ancho de la imagen renderizada (píxeles).
        image_height (int): Alto de la imagen renderizada (píxeles).
        scan (LidarScanSpec): Barrido del LiDAR simulado.
        range_noise_std (float): Desviación típica del ruido aditivo de rango (m).
        noise_seed (int): Semilla del generador de ruido.
    """

    floor_height: float = 0.0
    floor_intensity: float = 0.45
    background_intensity: float = 0.15
    boxes: tuple = ()
    image_width: int = 720
    image_height: int = 360
    scan: LidarScanSpec = field(default_factory=LidarScanSpec)
    range_noise_std: float = 0.0
    noise_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        _check_intensity("floor_intensity", self.floor_intensity)
        _check_intensity("background_intensity", self.background_intensity)
        if self.image_width < 1 or self.image_height < 1:
            raise RangeError("la resolución de la imagen debe ser positiva")
        if self.range_noise_std < 0:
            raise RangeError("range_noise_std no puede ser negativa")
