"""
Módulo que implementa la igualación de resolución por procesos gaussianos.

El mapa disperso se recorre en parches de n×n píxeles solapados. En cada
parche los píxeles con profundidad forman el conjunto de entrenamiento y el
resto se estima con la media y la varianza posteriores de un proceso
gaussiano de media constante. Las estimaciones de parches solapados se
mezclan ponderando por el inverso de la varianza.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.linalg import LinAlgError, cho_solve, cholesky, solve_triangular

from fusion.kernels import gram_matrix
from models.errors import EmptyMap, RangeError, SingularKernel
from models.maps import UNKNOWN_DEPTH, DenseDepthMap, GreyImage, UncertaintyMap, check_same_shape

logger = logging.getLogger(__name__)

# Jitter relativo a la media de la diagonal del núcleo
INITIAL_JITTER = 1e-10
MAX_JITTER = 1e-4

# Suelo de la varianza al ponderar parches
_MIN_VARIANCE = 1e-12

# Margen, relativo al rango de los datos del parche, fuera del cual una media
# posterior no se acepta como estimación
HULL_MARGIN = 0.5
HULL_TOL = 1e-9


def _cholesky_with_jitter(covariance, scale, patch_index=None):
    """
    Factoriza una matriz simétrica definida positiva escalando el jitter.

    Args:
        covariance (numpy.ndarray): Matriz K + σ_n²·Id.
        scale (float): Media de la diagonal de K.
        patch_index (int): Parche en curso, para el mensaje de error.

    Returns:
        numpy.ndarray: Factor triangular inferior.

    Raises:
        SingularKernel: Si la factorización falla con el jitter máximo.
    """
    relative = INITIAL_JITTER
    identity = np.eye(covariance.shape[0])
    while relative <= MAX_JITTER * (1 + 1e-9):
        try:
            return cholesky(covariance + relative * scale * identity, lower=True)
        except LinAlgError:
            logger.debug("Cholesky falló con jitter relativo %g", relative)
            relative *= 10.0
    raise SingularKernel("la matriz de covarianza no es definida positiva", patch_index)


def gp_posterior(train_pixels, values, query_pixels, image, params, patch_index=None):
    """
    Media y varianza posteriores de un proceso gaussiano de media constante.

    La media constante es la media aritmética de los valores de entrenamiento
    y la covarianza es signal_scale·κ. El sistema se resuelve por Cholesky.

    Args:
        train_pixels (numpy.ndarray): Píxeles de entrenamiento, forma (N, 2).
        values (numpy.ndarray): Profundidades observadas f, longitud N ≥ 1.
        query_pixels (numpy.ndarray): Píxeles a estimar, forma (M, 2).
        image (GreyImage): Imagen que aporta las intensidades.
        params (GpParams): Parámetros del proceso.
        patch_index (int): Índice del parche, sólo para los mensajes de error.

    Returns:
        tuple: Arreglos (medias, varianzas) de longitud M.

    Raises:
        RangeError: Si no hay datos de entrenamiento o las longitudes no coinciden.
        SingularKernel: Si la covarianza no se puede factorizar.
    """
    train = np.asarray(train_pixels, dtype=np.int64).reshape(-1, 2)
    query = np.asarray(query_pixels, dtype=np.int64).reshape(-1, 2)
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if train.shape[0] == 0 or train.shape[0] != values.size:
        raise RangeError("se necesita al menos un dato y tantos valores como píxeles")
    if query.shape[0] == 0:
        return np.empty(0), np.empty(0)

    scale = params.signal_scale
    train_cov = scale * gram_matrix(train, train, image, params)
    factor = _cholesky_with_jitter(
        train_cov + params.noise_variance * np.eye(train.shape[0]), scale, patch_index)

    cross_cov = scale * gram_matrix(train, query, image, params)
    mean_const = float(np.mean(values))
    weights = cho_solve((factor, True), values - mean_const)
    means = mean_const + cross_cov.T @ weights

    v = solve_triangular(factor, cross_cov, lower=True)
    variances = scale - np.einsum("ij,ij->j", v, v)
    return means, np.clip(variances, 0.0, scale)


def fuse_patch(sparse_window, grey_window, params, patch_index=None):
    """
    Rellena una ventana del mapa disperso.

    Args:
        sparse_window (SparseDepthMap): Ventana de profundidad dispersa.
        grey_window (GreyImage): Ventana de la imagen con la misma forma.
        params (GpParams): Parámetros del proceso.
        patch_index (int): Índice del parche, para los mensajes.

    Returns:
        tuple: (medias, varianzas, conocidos) como arreglos con la forma de la
        ventana. Si hay menos de min_train_points datos, toda la ventana queda
        desconocida con la varianza a priori.
        Las medias no positivas o alejadas del rango [min f, max f] más de
        HULL_MARGIN veces su amplitud también quedan desconocidas.
    """
    check_same_shape(sparse_window, grey_window)
    shape = sparse_window.shape
    filled = sparse_window.filled
    n_train = int(filled.sum())
    if n_train < params.min_train_points:
        logger.debug("Parche %s: %d datos, se marca desconocido", patch_index, n_train)
        return (np.full(shape, UNKNOWN_DEPTH), np.full(shape, params.signal_scale),
                np.zeros(shape, dtype=bool))

    train = np.argwhere(filled)
    query = np.argwhere(np.ones(shape, dtype=bool))
    values = sparse_window.depth[filled]
    means, variances = gp_posterior(train, values, query, grey_window, params, patch_index)
    means = means.reshape(shape)
    variances = variances.reshape(shape)
    low, high = values.min(), values.max()
    margin = HULL_MARGIN * (high - low) + HULL_TOL * max(1.0, high)
    known = (means > 0) & (means >= low - margin) & (means <= high + margin)
    known[filled] = True
    if not known.all():
        logger.debug("Parche %s: %d medias fuera de [%g, %g], se marcan desconocidas",
                     patch_index, int((~known).sum()), low, high)
        means[~known] = UNKNOWN_DEPTH
        variances[~known] = params.signal_scale
    means[filled] = values
    logger.debug("Parche %s: %d datos, %d estimados", patch_index, n_train,
                 int(known.sum()) - n_train)
    return means, variances, known


def patch_origins(length, size, stride):
    """
    Posiciones iniciales de los parches a lo largo de un eje.

    El último parche se alinea con el borde para cubrir todo el eje.

    Returns:
        list: Índices de inicio en orden creciente.
    """
    if length <= size:
        return [0]
    origins = list(range(0, length - size + 1, stride))
    if origins[-1] != length - size:
        origins.append(length - size)
    return origins


def fuse_frame(sparse, grey, params, threads=1):
    """
    Iguala la resolución del mapa disperso con la de la imagen.

    Args:
        sparse (SparseDepthMap): Mapa disperso proyectado.
        grey (GreyImage): Imagen de la misma resolución.
        params (GpParams): Parámetros del proceso.
        threads (int): Número de hilos para evaluar parches.

    Returns:
        tuple: (DenseDepthMap, UncertaintyMap).

    Raises:
        DimensionMismatch: Si las dimensiones no coinciden.
        EmptyMap: Si el mapa no tiene ningún píxel con profundidad.
        SingularKernel: Si algún parche no se puede factorizar.
    """
    check_same_shape(sparse, grey)
    if not np.any(sparse.filled):
        raise EmptyMap("el mapa de profundidad dispersa está vacío")
    if threads < 1:
        raise RangeError(f"el número de hilos debe ser positivo: {threads}")

    height, width = sparse.shape
    size = params.patch_size
    windows = [
        (row0, col0)
        for row0 in patch_origins(height, size, params.stride)
        for col0 in patch_origins(width, size, params.stride)
    ]

    def fuse_one(item):
        index, (row0, col0) = item
        rows = slice(row0, row0 + size)
        cols = slice(col0, col0 + size)
        window = sparse.window(row0, col0, size, size)
        grey_window = GreyImage(grey.intensity[rows, cols])
        return fuse_patch(window, grey_window, params, patch_index=index)

    if threads == 1:
        results = map(fuse_one, enumerate(windows))
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(fuse_one, enumerate(windows)))

    weight_sum = np.zeros((height, width))
    weighted_mean = np.zeros((height, width))
    # Acumulación en el orden de los parches para salidas deterministas
    for (row0, col0), (means, variances, known) in zip(windows, results):
        rows = slice(row0, row0 + means.shape[0])
        cols = slice(col0, col0 + means.shape[1])
        weights = np.where(known, 1.0 / np.maximum(variances, _MIN_VARIANCE), 0.0)
        weight_sum[rows, cols] += weights
        weighted_mean[rows, cols] += weights * np.where(known, means, 0.0)

    known = weight_sum > 0
    depth = np.full((height, width), UNKNOWN_DEPTH)
    depth[known] = weighted_mean[known] / weight_sum[known]
    depth[sparse.filled] = sparse.depth[sparse.filled]
    variance = np.full((height, width), params.signal_scale)
    variance[known] = 1.0 / weight_sum[known]
    logger.info("Fusionados %d parches; %d de %d píxeles con estimación",
                len(windows), int(known.sum()), known.size)
    return DenseDepthMap(depth, known), UncertaintyMap(variance)
