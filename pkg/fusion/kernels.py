"""
Módulo que define la función de covarianza de la igualación de resolución.

El núcleo es el producto de dos factores gaussianos: la cercanía espacial
entre píxeles y la similitud de sus niveles de gris.
"""

import numpy as np
from scipy.spatial.distance import cdist


def kernel_closeness(x, x_prime, k_p):
    """
    Cercanía entre dos píxeles, exp(−‖x − x'‖² / (2·K_p)).

    Args:
        x (PixelCoord | tuple): Primer píxel (fila, columna).
        x_prime (PixelCoord | tuple): Segundo píxel.
        k_p (float): Anchura espacial K_p en píxeles².

    Returns:
        float: Valor en (0, 1].
    """
    a = _as_pair(x)
    b = _as_pair(x_prime)
    squared = (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2
    return float(np.exp(-squared / (2.0 * k_p)))


def kernel_similarity(intensity, intensity_prime, k_l):
    """
    Similitud de intensidad, exp(−(I_x − I_x')² / (2·K_l)).
    """
    return float(np.exp(-(float(intensity) - float(intensity_prime)) ** 2 / (2.0 * k_l)))


def kernel(x, x_prime, image, params):
    """
    Núcleo completo κ(x, x') = c(x, x')·s(x, x').

    Args:
        x (PixelCoord | tuple): Primer píxel.
        x_prime (PixelCoord | tuple): Segundo píxel.
        image (GreyImage): Imagen de la que se leen las intensidades.
        params (GpParams): Anchuras de los núcleos.

    Returns:
        float: Valor en (0, 1]; 1 cuando x = x'.
    """
    a = _as_pair(x)
    b = _as_pair(x_prime)
    closeness = kernel_closeness(a, b, params.k_p)
    similarity = kernel_similarity(image.intensity[a], image.intensity[b], params.k_l)
    return closeness * similarity


def gram_matrix(pixels_a, pixels_b, image, params):
    """
    Matriz de núcleo entre dos listas de píxeles.

    Args:
        pixels_a (numpy.ndarray): Píxeles (fila, columna), forma (N, 2).
        pixels_b (numpy.ndarray): Píxeles, forma (M, 2).
        image (GreyImage): Imagen de intensidades.
        params (GpParams): Anchuras de los núcleos.

    Returns:
        numpy.ndarray: Matriz κ de forma (N, M), sin escalar por signal_scale.
    """
    pixels_a = np.asarray(pixels_a, dtype=np.int64).reshape(-1, 2)
    pixels_b = np.asarray(pixels_b, dtype=np.int64).reshape(-1, 2)
    intensity_a = image.intensity[pixels_a[:, 0], pixels_a[:, 1]].reshape(-1, 1)
    intensity_b = image.intensity[pixels_b[:, 0], pixels_b[:, 1]].reshape(-1, 1)
    spatial = cdist(pixels_a.astype(np.float64), pixels_b.astype(np.float64), "sqeuclidean")
    tonal = cdist(intensity_a, intensity_b, "sqeuclidean")
    return np.exp(-spatial / (2.0 * params.k_p) - tonal / (2.0 * params.k_l))


def _as_pair(pixel):
    if hasattr(pixel, "row"):
        return (int(pixel.row), int(pixel.col))
    row, col = pixel
    return (int(row), int(col))
