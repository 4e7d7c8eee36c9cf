"""
Módulo que implementa las métricas de comparación de máscaras y profundidades.

Las máscaras se binarizan con "libre" como clase positiva; los píxeles que la
referencia marca como desconocidos quedan fuera de todos los recuentos. Las
tasas con denominador nulo se devuelven como 1.0 y se señalan con una bandera.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from models.errors import EmptyValidSet
from models.maps import check_same_shape

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MaskMetrics:
    """
    Resultado de comparar una máscara predicha con la de referencia.

    Attributes:
        accuracy (float): Fracción de píxeles coincidentes.
        precision (float): TP / (TP + FP).
        true_positive_rate (float): TP / (TP + FN).
        mismatch_count (int): Píxeles discrepantes.
        total (int): Píxeles evaluados.
        undefined (tuple): Nombres de las tasas con denominador nulo.
    """

    accuracy: float
    precision: float
    true_positive_rate: float
    mismatch_count: int
    total: int
    undefined: tuple = field(default_factory=tuple)

    def as_dict(self):
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "tpr": self.true_positive_rate,
            "mismatches": self.mismatch_count,
            "total": self.total,
            "undefined": list(self.undefined),
        }


def _binarize(pred, gt):
    check_same_shape(pred, gt)
    evaluated = ~gt.unknown
    return pred.free[evaluated], gt.free[evaluated]


def mask_diff(pred, gt):
    """
    Número de píxeles en que las máscaras binarizadas difieren (xor).

    Args:
        pred (FreeSpaceMask): Máscara predicha.
        gt (FreeSpaceMask): Máscara de referencia.

    Returns:
        int: Píxeles discrepantes entre los que la referencia conoce.

    Raises:
        DimensionMismatch: Si las máscaras no comparten dimensiones.
    """
    predicted, actual = _binarize(pred, gt)
    return int(np.count_nonzero(predicted ^ actual))


def mask_metrics(pred, gt):
    """
    Exactitud, precisión y tasa de verdaderos positivos.

    Args:
        pred (FreeSpaceMask): Máscara predicha.
        gt (FreeSpaceMask): Máscara de referencia.

    Returns:
        MaskMetrics: Métricas con libre como clase positiva.

    Raises:
        DimensionMismatch: Si las máscaras no comparten dimensiones.
        EmptyValidSet: Si la referencia no conoce ningún píxel.
    """
    predicted, actual = _binarize(pred, gt)
    total = int(predicted.size)
    if total == 0:
        raise EmptyValidSet("la máscara de referencia no tiene píxeles conocidos")
    mismatches = int(np.count_nonzero(predicted ^ actual))
    tp = int(np.count_nonzero(predicted & actual))
    fp = int(np.count_nonzero(predicted & ~actual))
    fn = int(np.count_nonzero(~predicted & actual))

    undefined = []
    if tp + fp:
        precision = tp / (tp + fp)
    else:
        precision = 1.0
        undefined.append("precision")
    if tp + fn:
        tpr = tp / (tp + fn)
    else:
        tpr = 1.0
        undefined.append("tpr")

    metrics = MaskMetrics((total - mismatches) / total, precision, tpr, mismatches,
                          total, tuple(undefined))
    logger.info("Exactitud %.6f sobre %d píxeles", metrics.accuracy, total)
    return metrics


def depth_rmse(pred, gt, valid=None):
    """
    Raíz del error cuadrático medio entre dos mapas de profundidad.

    Args:
        pred (DenseDepthMap): Profundidad estimada.
        gt (DenseDepthMap): Profundidad de referencia.
        valid (numpy.ndarray): Máscara opcional; se combina con los píxeles
            conocidos en ambos mapas.

    Returns:
        float: RMSE en metros.

    Raises:
        DimensionMismatch: Si los mapas no comparten dimensiones.
        EmptyValidSet: Si no queda ningún píxel válido.
    """
    check_same_shape(pred, gt)
    mask = pred.known & gt.known
    if valid is not None:
        mask &= np.asarray(valid, dtype=bool)
    if not np.any(mask):
        raise EmptyValidSet("no hay píxeles válidos para calcular el RMSE")
    errors = pred.depth[mask] - gt.depth[mask]
    return float(np.sqrt(np.mean(errors ** 2)))
