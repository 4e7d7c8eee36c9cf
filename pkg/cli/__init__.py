"""
Paquete que contiene la línea de comandos.
"""

from cli.commands import build_parser, load_scene, main

__all__ = ['build_parser', 'load_scene', 'main']
