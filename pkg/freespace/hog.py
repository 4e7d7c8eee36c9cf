"""
Módulo que calcula histogramas de gradientes orientados (HoG) sobre parches de 16×16.

Cada parche se divide en cuatro celdas de 8×8; cada celda acumula un
histograma de 9 orientaciones sin signo en [0, π) con voto lineal entre los
dos centros más próximos, y el vector de 36 valores se normaliza en L2 como
un único bloque.
"""

import numpy as np

from models.errors import RangeError

PATCH_SIZE = 16
CELL_SIZE = 8
N_BINS = 9
HOG_LENGTH = (PATCH_SIZE // CELL_SIZE) ** 2 * N_BINS
NORM_EPS = 1e-6


def gradients(patch):
    """
    Gradientes por diferencias centrales con réplica del borde.

    Returns:
        tuple: (gx, gy) en la dirección de las columnas y de las filas.
    """
    padded = np.pad(patch, 1, mode="edge")
    gx = padded[1:-1, 2:] - padded[1:-1, :-2]
    gy = padded[2:, 1:-1] - padded[:-2, 1:-1]
    return gx, gy


def hog_features(patch):
    """
    Calcula el descriptor HoG de un parche de 16×16.

    Los centros de las orientaciones están en k·π/9, de modo que un gradiente
    horizontal puro cae entero en la orientación 0.

    Args:
        patch (numpy.ndarray): Intensidades en [0, 1], forma (16, 16).

    Returns:
        numpy.ndarray: Vector de 36 valores no negativos con norma ≤ 1.

    Raises:
        RangeError: Si el parche no mide 16×16.
    """
    patch = np.asarray(patch, dtype=np.float64)
    if patch.shape != (PATCH_SIZE, PATCH_SIZE):
        raise RangeError(f"el parche debe medir {PATCH_SIZE}x{PATCH_SIZE}: {patch.shape}")

    gx, gy = gradients(patch)
    magnitude = np.hypot(gx, gy)
    orientation = np.mod(np.arctan2(gy, gx), np.pi)

    position = orientation / (np.pi / N_BINS)
    lower = np.floor(position).astype(np.int64)
    upper_weight = position - lower
    lower %= N_BINS
    upper = (lower + 1) % N_BINS

    rows, cols = np.indices(patch.shape)
    cells = (rows // CELL_SIZE) * (PATCH_SIZE // CELL_SIZE) + cols // CELL_SIZE
    histogram = np.zeros((cells.max() + 1, N_BINS))
    np.add.at(histogram, (cells.ravel(), lower.ravel()),
              (magnitude * (1.0 - upper_weight)).ravel())
    np.add.at(histogram, (cells.ravel(), upper.ravel()), (magnitude * upper_weight).ravel())

    features = histogram.ravel()
    return features / np.sqrt(np.sum(features ** 2) + NORM_EPS ** 2)


def patch_descriptor(patch):
    """
    Descriptor del clasificador: HoG más el nivel de gris medio del parche.

    Returns:
        numpy.ndarray: Vector de 37 valores.
    """
    patch = np.asarray(patch, dtype=np.float64)
    return np.append(hog_features(patch), patch.mean())
