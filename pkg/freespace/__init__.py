"""
Paquete que contiene la detección de espacio libre.

Incluye la prueba de nivel del suelo sobre la profundidad fusionada, el
clasificador de bloques de imagen y las mallas de ocupación con sus fusiones.
"""

from freespace.classifier import (
    GroundClassifier,
    classify_image,
    collect_labelled_tiles,
    scores_to_labels,
    train_classifier,
)
from freespace.ground import (fuse_free_masks, ground_mask_from_depth, height_deviations,
                              reconstruct_heights)
from freespace.hog import hog_features, patch_descriptor
from freespace.ogmap import (
    blind_radius,
    blind_spot_mask,
    fuse_ogmaps_conservative,
    fuse_ogmaps_uncertainty,
    image_ogmap,
    lidar_ogmap,
)

__all__ = [
    'GroundClassifier', 'blind_radius', 'blind_spot_mask', 'classify_image',
    'collect_labelled_tiles', 'fuse_free_masks', 'fuse_ogmaps_conservative',
    'fuse_ogmaps_uncertainty', 'ground_mask_from_depth', 'height_deviations',
    'hog_features', 'image_ogmap', 'lidar_ogmap', 'patch_descriptor', 'reconstruct_heights',
    'scores_to_labels', 'train_classifier',
]
