"""
Módulo que define la jerarquía de errores de la biblioteca de fusión.

Todas las excepciones heredan de FusionError y llevan un código de salida
que la línea de comandos utiliza directamente: 2 para errores de entrada o
de formato y 3 para fallos numéricos.
"""


class FusionError(Exception):
    """
    Error base de la biblioteca.

    Attributes:
        exit_code (int): Código de salida asociado para la línea de comandos.
    """

    exit_code = 2


class ParseError(FusionError):
    """
    Error al interpretar un archivo o texto de entrada.

    Attributes:
        line (int): Número de línea (base 1) donde se detectó el error, si aplica.
        field (str): Nombre del campo de cabecera o clave mal formada, si aplica.
    """

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        if line is not None:
            message = f"línea {line}: {message}"
        super().__init__(message)


class ConfigError(ParseError):
    """Clave desconocida, repetida o con valor inválido en un archivo de configuración."""


class RangeError(FusionError, ValueError):
    """Un valor numérico está fuera del rango permitido por su invariante."""


class EmptyCloud(FusionError):
    """La nube de puntos no contiene ningún retorno."""


class EmptyMap(FusionError):
    """El mapa de profundidad dispersa no tiene ningún píxel con valor."""


class EmptyValidSet(FusionError):
    """No queda ningún píxel válido sobre el que calcular una métrica."""


class DimensionMismatch(FusionError):
    """Dos mapas o imágenes que deberían compartir dimensiones no lo hacen."""


class GridMismatch(FusionError):
    """Dos mallas de ocupación no comparten la misma geometría."""


class DegenerateLabels(FusionError):
    """El conjunto de entrenamiento del clasificador carece de una de las clases."""


class DegenerateGeometry(FusionError):
    """
    La geometría del punto no permite calcular una dirección de cámara.

    Ocurre cuando el punto coincide con el centro de uno de los sensores o su
    proyección sobre el plano del suelo cae sobre el eje de la cámara.
    """

    exit_code = 3


class SingularKernel(FusionError):
    """
    La factorización de Cholesky falló incluso tras escalar el jitter.

    Attributes:
        patch_index (int): Índice del parche que falló, o None si se desconoce.
    """

    exit_code = 3

    def __init__(self, message, patch_index=None):
        self.patch_index = patch_index
        if patch_index is not None:
            message = f"parche {patch_index}: {message}"
        super().__init__(message)
