"""
Módulo que implementa los métodos de referencia para rellenar profundidad.

Vecino más cercano e interpolación por inverso de la distancia, ambos sobre
un árbol k-d de los píxeles con valor.
"""

import logging

import numpy as np
from scipy.spatial import cKDTree

from models.errors import EmptyMap, RangeError
from models.maps import DenseDepthMap

logger = logging.getLogger(__name__)

# Vecinos consultados para resolver empates del vecino más cercano
_TIE_NEIGHBOURS = 16

# Vecinos máximos que entran en la media ponderada
IDW_NEIGHBOURS = 32


def _filled_tree(sparse):
    filled = sparse.filled
    if not np.any(filled):
        raise EmptyMap("el mapa de profundidad dispersa está vacío")
    # argwhere recorre en orden de filas: el índice coincide con el orden (fila, columna)
    pixels = np.argwhere(filled)
    return pixels, sparse.depth[filled], cKDTree(pixels.astype(np.float64))


def _nearest_indices(tree, pixels, queries):
    """
    Índice del píxel con valor más cercano a cada consulta.

    Los empates se resuelven a favor de la fila menor y después la columna menor.
    """
    k = min(_TIE_NEIGHBOURS, pixels.shape[0])
    distances, indices = tree.query(queries, k=k)
    distances = distances.reshape(len(queries), k)
    indices = indices.reshape(len(queries), k)
    tied = distances <= distances[:, :1] + 1e-9
    chosen = np.where(tied, indices, np.iinfo(np.int64).max).min(axis=1)

    saturated = np.nonzero(tied[:, -1])[0] if k < pixels.shape[0] else np.empty(0, dtype=int)
    for q in saturated:
        candidates = tree.query_ball_point(queries[q], distances[q, 0] + 1e-9)
        chosen[q] = min(candidates)
    return chosen


def baseline_nearest(sparse):
    """
    Rellena cada píxel vacío con el valor del píxel con dato más cercano.

    Args:
        sparse (SparseDepthMap): Mapa disperso.

    Returns:
        DenseDepthMap: Mapa completamente conocido.

    Raises:
        EmptyMap: Si no hay ningún píxel con valor.
    """
    pixels, values, tree = _filled_tree(sparse)
    depth = sparse.depth.copy()
    empty = np.argwhere(~sparse.filled)
    if empty.size:
        nearest = _nearest_indices(tree, pixels, empty.astype(np.float64))
        depth[empty[:, 0], empty[:, 1]] = values[nearest]
    logger.info("Vecino más cercano: %d píxeles rellenados", len(empty))
    return DenseDepthMap(depth, np.ones(depth.shape, dtype=bool))


def baseline_idw(sparse, power=2.0, radius=8.0):
    """
    Media ponderada por el inverso de la distancia dentro de un radio.

    Se usan como mucho IDW_NEIGHBOURS vecinos; si ninguno cae dentro del radio
    se toma el vecino más cercano.

    Args:
        sparse (SparseDepthMap): Mapa disperso.
        power (float): Exponente de la distancia.
        radius (float): Radio de búsqueda en píxeles.

    Returns:
        DenseDepthMap: Mapa completamente conocido.

    Raises:
        EmptyMap: Si no hay ningún píxel con valor.
        RangeError: Si el exponente o el radio no son positivos.
    """
    if not power > 0 or not radius > 0:
        raise RangeError("power y radius deben ser positivos")
    pixels, values, tree = _filled_tree(sparse)
    depth = sparse.depth.copy()
    empty = np.argwhere(~sparse.filled)
    if empty.size == 0:
        return DenseDepthMap(depth, np.ones(depth.shape, dtype=bool))

    queries = empty.astype(np.float64)
    k = min(IDW_NEIGHBOURS, pixels.shape[0])
    distances, indices = tree.query(queries, k=k, distance_upper_bound=radius)
    distances = distances.reshape(len(queries), k)
    indices = indices.reshape(len(queries), k)
    inside = np.isfinite(distances)
    safe_indices = np.where(inside, indices, 0)
    weights = np.where(inside, 1.0 / np.maximum(distances, 1e-12) ** power, 0.0)
    weight_sum = weights.sum(axis=1)
    estimates = np.empty(len(queries))
    supported = weight_sum > 0
    estimates[supported] = (
        (weights * values[safe_indices]).sum(axis=1)[supported] / weight_sum[supported])

    if np.any(~supported):
        logger.debug("IDW: %d píxeles sin vecinos en el radio", int((~supported).sum()))
        nearest = _nearest_indices(tree, pixels, queries[~supported])
        estimates[~supported] = values[nearest]

    depth[empty[:, 0], empty[:, 1]] = estimates
    logger.info("IDW: %d píxeles rellenados", len(empty))
    return DenseDepthMap(depth, np.ones(depth.shape, dtype=bool))
