"""
Punto de entrada para la fusión de LiDAR y cámara equirectangular.

Este módulo delega en la línea de comandos del paquete cli.
"""

import sys

from cli.commands import main


if __name__ == "__main__":
    sys.exit(main())
