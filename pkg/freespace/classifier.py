"""
Módulo que implementa el clasificador de espacio libre basado en imagen.

La imagen se recorre en bloques de 16×16; cada bloque se describe con su HoG
y su nivel de gris medio, y un clasificador de núcleo RBF entrenado por
mínimos cuadrados regularizados decide si es suelo libre u obstáculo.
"""

import logging

import numpy as np
from scipy.spatial.distance import pdist
from sklearn.kernel_ridge import KernelRidge

from freespace.hog import PATCH_SIZE, patch_descriptor
from models.errors import DegenerateLabels, RangeError
from models.maps import FreeSpaceMask, Label

logger = logging.getLogger(__name__)

DEFAULT_REGULARIZATION = 1e-3

# Puntuaciones con valor absoluto menor cuentan como empate (ocupado)
DECISION_TOL = 1e-12


class GroundClassifier:
    """
    Clasificador de bloques por mínimos cuadrados regularizados con núcleo RBF.

    Resuelve (K + λ·Id)·c = y con y = +1 para bloques libres y −1 para
    obstáculos. Cualquier objeto con un método predict(descriptores) que
    devuelva puntuaciones puede sustituirlo en classify_image.

    Attributes:
        kernel_width (float): Anchura w del núcleo exp(−‖a − b‖² / (2·w²)).
        regularization (float): Peso λ de la regularización.
        model (KernelRidge): Estimador ajustado.
    """

    def __init__(self, kernel_width, regularization=DEFAULT_REGULARIZATION):
        if not kernel_width > 0:
            raise RangeError(f"kernel_width debe ser positivo: {kernel_width}")
        if not regularization > 0:
            raise RangeError(f"la regularización debe ser positiva: {regularization}")
        self.kernel_width = float(kernel_width)
        self.regularization = float(regularization)
        self.model = KernelRidge(alpha=self.regularization, kernel="rbf",
                                 gamma=1.0 / (2.0 * self.kernel_width ** 2))

    def fit(self, descriptors, targets):
        self.model.fit(np.asarray(descriptors, dtype=np.float64),
                       np.asarray(targets, dtype=np.float64))
        return self

    def predict(self, descriptors):
        """
        Puntuaciones de los descriptores; positivas para espacio libre.

        Returns:
            numpy.ndarray: Una puntuación por fila.
        """
        return np.asarray(self.model.predict(np.atleast_2d(descriptors)), dtype=np.float64).ravel()


def scores_to_labels(scores):
    """
    Convierte puntuaciones en etiquetas; el empate se resuelve como ocupado.
    """
    scores = np.asarray(scores, dtype=np.float64)
    return np.where(scores > DECISION_TOL, int(Label.FREE), int(Label.OCCUPIED)).astype(np.uint8)


def median_distance(descriptors):
    """
    Mediana de las distancias entre descriptores, o 1 si es nula.
    """
    if len(descriptors) < 2:
        return 1.0
    median = float(np.median(pdist(descriptors)))
    return median if median > 0 else 1.0


def train_classifier(patches, free, kernel_width=None, regularization=DEFAULT_REGULARIZATION):
    """
    Entrena el clasificador de bloques.

    Args:
        patches (numpy.ndarray): Bloques de 16×16, forma (N, 16, 16).
        free (numpy.ndarray): Etiqueta de cada bloque, True para espacio libre.
        kernel_width (float): Anchura del núcleo; por defecto la mediana de las
            distancias entre descriptores.
        regularization (float): Peso λ.

    Returns:
        GroundClassifier: Clasificador ajustado.

    Raises:
        DegenerateLabels: Si alguna de las dos clases no tiene bloques.
    """
    free = np.asarray(free, dtype=bool).reshape(-1)
    if len(patches) != free.size:
        raise RangeError("cada bloque necesita una etiqueta")
    if not np.any(free) or np.all(free):
        raise DegenerateLabels(
            f"se necesitan bloques de ambas clases: {int(free.sum())} libres, "
            f"{int((~free).sum())} ocupados")
    descriptors = np.array([patch_descriptor(p) for p in patches])
    if kernel_width is None:
        kernel_width = median_distance(descriptors)
    classifier = GroundClassifier(kernel_width, regularization)
    classifier.fit(descriptors, np.where(free, 1.0, -1.0))
    logger.info("Clasificador entrenado con %d bloques (anchura %.4g, λ=%g)",
                free.size, kernel_width, regularization)
    return classifier


def _tile_indices(start, length):
    # Índices recortados al borde: los bloques finales replican la última fila o columna
    return np.clip(np.arange(start, start + PATCH_SIZE), 0, length - 1)


def iter_tiles(shape):
    """
    Recorre el mosaico de bloques de 16×16 sin solape.

    Yields:
        tuple: (fila0, col0, índices de filas, índices de columnas).
    """
    height, width = shape
    for row0 in range(0, height, PATCH_SIZE):
        for col0 in range(0, width, PATCH_SIZE):
            yield row0, col0, _tile_indices(row0, height), _tile_indices(col0, width)


def classify_image(grey, classifier):
    """
    Clasifica la imagen completa bloque a bloque.

    Args:
        grey (GreyImage): Imagen en niveles de gris.
        classifier: Objeto con predict(descriptores).

    Returns:
        FreeSpaceMask: Cada píxel recibe la etiqueta de su bloque.
    """
    tiles = list(iter_tiles(grey.shape))
    descriptors = np.array([
        patch_descriptor(grey.intensity[np.ix_(rows, cols)]) for _, _, rows, cols in tiles
    ])
    tile_labels = scores_to_labels(classifier.predict(descriptors))
    labels = np.empty(grey.shape, dtype=np.uint8)
    for (row0, col0, _, _), label in zip(tiles, tile_labels):
        labels[row0:row0 + PATCH_SIZE, col0:col0 + PATCH_SIZE] = label
    logger.info("Imagen clasificada en %d bloques", len(tiles))
    return FreeSpaceMask(labels)


def collect_labelled_tiles(grey, mask, purity=0.9):
    """
    Reúne bloques de entrenamiento etiquetados por una máscara.

    Sólo se conservan los bloques completos en los que una etiqueta decidida
    cubre al menos la fracción purity de los píxeles.

    Args:
        grey (GreyImage): Imagen en niveles de gris.
        mask (FreeSpaceMask): Máscara que aporta las etiquetas.
        purity (float): Fracción mínima de la etiqueta dominante.

    Returns:
        tuple: (bloques con forma (N, 16, 16), etiquetas booleanas de espacio libre).
    """
    if grey.shape != mask.shape:
        raise RangeError("la imagen y la máscara deben tener la misma forma")
    height, width = grey.shape
    patches, free = [], []
    for row0 in range(0, height - PATCH_SIZE + 1, PATCH_SIZE):
        for col0 in range(0, width - PATCH_SIZE + 1, PATCH_SIZE):
            window = (slice(row0, row0 + PATCH_SIZE), slice(col0, col0 + PATCH_SIZE))
            free_fraction = float(mask.free[window].mean())
            occupied_fraction = float(mask.occupied[window].mean())
            if free_fraction >= purity:
                patches.append(grey.intensity[window])
                free.append(True)
            elif occupied_fraction >= purity:
                patches.append(grey.intensity[window])
                free.append(False)
    logger.debug("Reunidos %d bloques etiquetados", len(patches))
    return np.array(patches).reshape(-1, PATCH_SIZE, PATCH_SIZE), np.array(free, dtype=bool)
