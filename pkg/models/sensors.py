"""
Módulo que define los tipos de datos de los sensores.

Contiene los parámetros extrínsecos del montaje LiDAR + cámara, los retornos
polares del LiDAR (individuales y como nube completa) y las direcciones y
coordenadas de píxel de la cámara equirectangular.

Convenciones del marco de mundo: x hacia delante, y hacia la izquierda, z hacia
arriba. El centro del LiDAR está en (0, 0, H_L) y el de la cámara en
(Δx, −Δy, H_C). Las latitudes son positivas por debajo del horizonte.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from models.errors import RangeError


@dataclass(frozen=True)
class RigExtrinsics:
    """
    Parámetros de alineación entre el LiDAR y la cámara.

    Los valores por defecto son los de la calibración del vehículo de pruebas.

    Attributes:
        cam_height (float): Altura H_C del centro de la cámara sobre el suelo (m).
        lidar_height (float): Altura H_L del centro del LiDAR sobre el suelo (m).
        frontal_offset (float): Desplazamiento frontal Δx de la cámara respecto al LiDAR (m).
        lateral_offset (float): Desplazamiento lateral Δy (m); positivo deja la
            cámara a la derecha del LiDAR, es decir, en y = −Δy.
        lidar_vfov_halfangle (float): Semiapertura vertical del LiDAR (rad).
        lidar_max_range (float): Alcance máximo del LiDAR (m).
    """

    cam_height: float = 0.55
    lidar_height: float = 0.61
    frontal_offset: float = 0.5
    lateral_offset: float = 0.07
    lidar_vfov_halfangle: float = math.radians(15.0)
    lidar_max_range: float = 100.0

    def __post_init__(self):
        if not self.cam_height > 0:
            raise RangeError(f"cam_height debe ser positiva: {self.cam_height}")
        if not self.lidar_height > 0:
            raise RangeError(f"lidar_height debe ser positiva: {self.lidar_height}")
        if not self.lidar_max_range > 0:
            raise RangeError(f"lidar_max_range debe ser positivo: {self.lidar_max_range}")
        if not 0 < self.lidar_vfov_halfangle < math.pi / 2:
            raise RangeError(
                f"lidar_vfov_halfangle fuera de (0, π/2): {self.lidar_vfov_halfangle}")

    @property
    def camera_center(self):
        """
        Devuelve el centro de la cámara en el marco de mundo.

        Returns:
            tuple: (x, y, z) en metros.
        """
        return (self.frontal_offset, -self.lateral_offset, self.cam_height)

    @property
    def lidar_center(self):
        """
        Devuelve el centro del LiDAR en el marco de mundo.

        Returns:
            tuple: (x, y, z) en metros.
        """
        return (0.0, 0.0, self.lidar_height)


@dataclass(frozen=True)
class LidarPoint:
    """
    Un retorno polar del LiDAR.

    Attributes:
        range (float): Distancia d_L medida (m).
        latitude (float): Latitud β (rad), positiva por debajo del plano del sensor.
        longitude (float): Longitud γ_L (rad) en (−π, π].
    """

    range: float
    latitude: float
    longitude: float

    def __post_init__(self):
        if not self.range > 0:
            raise RangeError(f"el rango del punto debe ser positivo: {self.range}")

    @property
    def ground_distance(self):
        """
        Distancia frontal sobre el plano del suelo, D = d_L·cos β·cos γ_L.

        Returns:
            float: Distancia D en metros.
        """
        return self.range * math.cos(self.latitude) * math.cos(self.longitude)


@dataclass(frozen=True)
class CameraDirection:
    """
    Dirección de observación de la cámara.

    Attributes:
        latitude (float): Latitud α (rad), positiva por debajo del horizonte.
        longitude (float): Longitud γ_C (rad) en (−π, π].
    """

    latitude: float
    longitude: float


@dataclass(frozen=True)
class PixelCoord:
    """
    Coordenada entera de un píxel de la imagen equirectangular.

    Attributes:
        row (int): Fila, 0 arriba.
        col (int): Columna, 0 a la izquierda.
    """

    row: int
    col: int


@dataclass
class PointCloud:
    """
    Nube de retornos del LiDAR almacenada como tres vectores paralelos.

    Attributes:
        ranges (numpy.ndarray): Distancias d_L (m).
        latitudes (numpy.ndarray): Latitudes β (rad).
        longitudes (numpy.ndarray): Longitudes γ_L (rad).
    """

    ranges: np.ndarray = field(default_factory=lambda: np.empty(0))
    latitudes: np.ndarray = field(default_factory=lambda: np.empty(0))
    longitudes: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        self.ranges = np.asarray(self.ranges, dtype=np.float64).reshape(-1)
        self.latitudes = np.asarray(self.latitudes, dtype=np.float64).reshape(-1)
        self.longitudes = np.asarray(self.longitudes, dtype=np.float64).reshape(-1)
        if not (self.ranges.size == self.latitudes.size == self.longitudes.size):
            raise RangeError("los tres vectores de la nube deben tener la misma longitud")
        if np.any(~(self.ranges > 0)):
            raise RangeError("todos los rangos de la nube deben ser positivos")

    @classmethod
    def from_points(cls, points):
        """
        Construye una nube a partir de una secuencia de LidarPoint.

        Args:
            points (iterable): Puntos LidarPoint.

        Returns:
            PointCloud: La nube equivalente.
        """
        points = list(points)
        return cls(
            [p.range for p in points],
            [p.latitude for p in points],
            [p.longitude for p in points],
        )

    def ground_distances(self):
        """
        Distancias frontales D de todos los retornos.

        Returns:
            numpy.ndarray: D = d_L·cos β·cos γ_L por punto.
        """
        return self.ranges * np.cos(self.latitudes) * np.cos(self.longitudes)

    def world_points(self, rig):
        """
        Coordenadas de mundo de todos los retornos.

        Args:
            rig (RigExtrinsics): Montaje de sensores.

        Returns:
            tuple: Vectores (x, y, z) en metros.
        """
        horizontal = self.ranges * np.cos(self.latitudes)
        x = horizontal * np.cos(self.longitudes)
        y = horizontal * np.sin(self.longitudes)
        z = rig.lidar_height - self.ranges * np.sin(self.latitudes)
        return x, y, z

    def subset(self, keep):
        """
        Devuelve la nube restringida a los puntos indicados.

        Args:
            keep (numpy.ndarray): Máscara booleana o índices.

        Returns:
            PointCloud: Nueva nube.
        """
        return PointCloud(self.ranges[keep], self.latitudes[keep], self.longitudes[keep])

    def __len__(self):
        return int(self.ranges.size)

    def __iter__(self):
        for d, beta, gamma in zip(self.ranges, self.latitudes, self.longitudes):
            yield LidarPoint(float(d), float(beta), float(gamma))
