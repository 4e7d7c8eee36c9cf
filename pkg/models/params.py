"""
Módulo que define los parámetros ajustables de la fusión y la detección de espacio libre.
"""

from dataclasses import dataclass

from models.errors import RangeError


@dataclass(frozen=True)
class GpParams:
    """
    Parámetros de la regresión por procesos gaussianos.

    Attributes:
        k_p (float): Anchura K_p del núcleo espacial (píxeles²).
        k_l (float): Anchura K_l del núcleo de intensidad (intensidad normalizada²).
        noise_variance (float): Varianza de ruido σ_n² (m²) sumada a la diagonal.
        patch_size (int): Lado n de cada parche (píxeles).
        patch_overlap (int): Solape entre parches vecinos (píxeles).
        min_train_points (int): Mínimo de píxeles con profundidad para resolver un parche.
        signal_scale (float): Varianza a priori de la señal (m²).
    """

    k_p: float = 16.0
    k_l: float = 0.01
    noise_variance: float = 1e-4
    patch_size: int = 32
    patch_overlap: int = 8
    min_train_points: int = 4
    signal_scale: float = 1.0

    def __post_init__(self):
        if not self.k_p > 0:
            raise RangeError(f"k_p debe ser positivo: {self.k_p}")
        if not self.k_l > 0:
            raise RangeError(f"k_l debe ser positivo: {self.k_l}")
        if not self.noise_variance >= 0:
            raise RangeError(f"noise_variance no puede ser negativa: {self.noise_variance}")
        if not self.signal_scale > 0:
            raise RangeError(f"signal_scale debe ser positiva: {self.signal_scale}")
        if self.patch_size < 1:
            raise RangeError(f"patch_size debe ser al menos 1: {self.patch_size}")
        if not 0 <= self.patch_overlap < self.patch_size:
            raise RangeError("patch_overlap debe estar en [0, patch_size)")
        if self.min_train_points < 1:
            raise RangeError("min_train_points debe ser al menos 1")

    @property
    def stride(self):
        return self.patch_size - self.patch_overlap


@dataclass(frozen=True)
class FreeSpaceParams:
    """
    Umbrales de la prueba de nivel del suelo.

    Attributes:
        height_tol (float): Tolerancia de altura respecto al suelo (m).
        unc_tol (float): Varianza máxima aceptada para decidir un píxel (m²).
        max_depth (float): Profundidad máxima evaluada (m); más allá el píxel es desconocido.
    """

    height_tol: float = 0.05
    unc_tol: float = 0.25
    max_depth: float = 10.0

    def __post_init__(self):
        if not self.height_tol >= 0:
            raise RangeError(f"height_tol no puede ser negativa: {self.height_tol}")
        if not self.unc_tol >= 0:
            raise RangeError(f"unc_tol no puede ser negativa: {self.unc_tol}")
        if not self.max_depth > 0:
            raise RangeError(f"max_depth debe ser positiva: {self.max_depth}")
