"""
Módulo que lee y escribe nubes de puntos en formato de texto.

Una línea por retorno con tres campos decimales separados por espacios:
rango en metros, latitud β y longitud γ_L en radianes. Las líneas vacías y
las que empiezan por '#' se ignoran.
"""

import numpy as np

from models.errors import ParseError, RangeError
from models.sensors import PointCloud

HEADER = "# d_L_meters beta_radians gamma_L_radians\n"


def read_point_cloud(text):
    """
    Interpreta el texto de una nube de puntos.

    Args:
        text (str): Contenido del archivo.

    Returns:
        PointCloud: La nube leída (puede estar vacía).

    Raises:
        ParseError: Si una línea no tiene exactamente tres números.
        RangeError: Si algún rango no es positivo.
    """
    ranges, latitudes, longitudes = [], [], []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if len(fields) != 3:
            raise ParseError(f"se esperaban 3 campos y hay {len(fields)}", line=number)
        try:
            d, beta, gamma = (float(f) for f in fields)
        except ValueError:
            raise ParseError(f"campo no numérico en {stripped!r}", line=number) from None
        if not d > 0:
            raise RangeError(f"línea {number}: el rango debe ser positivo: {d}")
        ranges.append(d)
        latitudes.append(beta)
        longitudes.append(gamma)
    return PointCloud(np.array(ranges), np.array(latitudes), np.array(longitudes))


def write_point_cloud(cloud):
    """
    Serializa una nube con 17 cifras significativas por campo.

    Args:
        cloud (PointCloud): Nube a escribir.

    Returns:
        str: Texto con una cabecera de comentario y una línea por retorno.
    """
    lines = [HEADER]
    for d, beta, gamma in zip(cloud.ranges, cloud.latitudes, cloud.longitudes):
        lines.append(f"{d:.17g} {beta:.17g} {gamma:.17g}\n")
    return "".join(lines)
