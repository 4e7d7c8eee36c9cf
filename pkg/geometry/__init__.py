"""
Paquete que contiene la geometría de alineación LiDAR-cámara.
"""

from geometry.sensor_geometry import (
    align_cloud,
    align_point,
    camera_latitude,
    camera_longitude,
    camera_ranges,
    direction_to_pixel,
    direction_vectors,
    directions_to_pixels,
    ground_intersection,
    image_directions,
    inverse_project,
    occluded_mask,
    pixel_to_direction,
    project_cloud,
)

__all__ = [
    'align_cloud', 'align_point', 'camera_latitude', 'camera_longitude', 'camera_ranges',
    'direction_to_pixel', 'direction_vectors', 'directions_to_pixels',
    'ground_intersection', 'image_directions', 'inverse_project',
    'occluded_mask', 'pixel_to_direction', 'project_cloud',
]
