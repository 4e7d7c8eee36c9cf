"""
Paquete que contiene las métricas de evaluación.
"""

from evaluation.metrics import MaskMetrics, depth_rmse, mask_diff, mask_metrics

__all__ = ['MaskMetrics', 'depth_rmse', 'mask_diff', 'mask_metrics']
