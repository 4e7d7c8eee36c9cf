"""
Paquete que contiene la igualación de resolución entre LiDAR e imagen.

Incluye el núcleo de covarianza, la regresión por procesos gaussianos por
parches y los métodos de referencia para comparar.
"""

from fusion.baselines import baseline_idw, baseline_nearest
from fusion.gp_fusion import fuse_frame, fuse_patch, gp_posterior, patch_origins
from fusion.kernels import gram_matrix, kernel, kernel_closeness, kernel_similarity

__all__ = [
    'baseline_idw', 'baseline_nearest', 'fuse_frame', 'fuse_patch', 'gp_posterior',
    'gram_matrix', 'kernel', 'kernel_closeness', 'kernel_similarity', 'patch_origins',
]
