"""
Paquete que contiene el oráculo de escenas sintéticas.
"""

from simulation.synthetic_scene import (
    SHIPPED_SCENES,
    cast_rays,
    ground_truth_free_mask,
    intersect_box,
    render_camera,
    sample_lidar,
    shipped_scene,
)

__all__ = [
    'SHIPPED_SCENES', 'cast_rays', 'ground_truth_free_mask', 'intersect_box',
    'render_camera', 'sample_lidar', 'shipped_scene',
]
