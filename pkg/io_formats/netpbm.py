"""
Módulo que lee y escribe imágenes PGM binarias (P5) y mapas flotantes PFM (Pf).

Las funciones trabajan sobre bytes en memoria; la lectura y escritura de
archivos queda en io_formats.artifacts. Los lectores rechazan cabeceras mal
formadas y cualquier byte sobrante tras la carga útil.
"""

import numpy as np

from models.errors import ParseError

PGM_MAGIC = b"P5"
PFM_MAGIC = b"Pf"
PGM_MAXVAL = 255
PFM_SCALE = -1.0

_WHITESPACE = b" \t\r\n"


def _read_token(data, pos, field):
    """
    Lee el siguiente campo de una cabecera Netpbm, saltando comentarios.

    Returns:
        tuple: (token en bytes, posición justo después del token).
    """
    length = len(data)
    while pos < length:
        if data[pos:pos + 1] in (b" ", b"\t", b"\r", b"\n"):
            pos += 1
        elif data[pos:pos + 1] == b"#":
            while pos < length and data[pos:pos + 1] != b"\n":
                pos += 1
        else:
            break
    start = pos
    while pos < length and data[pos] not in _WHITESPACE:
        pos += 1
    if start == pos:
        raise ParseError(f"falta el campo de cabecera {field}", field=field)
    return data[start:pos], pos


def _read_int(data, pos, field):
    token, pos = _read_token(data, pos, field)
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"campo de cabecera {field} no entero: {token!r}", field=field) from None
    if value <= 0:
        raise ParseError(f"campo de cabecera {field} debe ser positivo: {value}", field=field)
    return value, pos


def _payload(data, pos, expected, field):
    # Un único carácter blanco separa la cabecera de la carga útil
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise ParseError(f"cabecera sin separador tras {field}", field=field)
    payload = data[pos + 1:]
    if len(payload) < expected:
        raise ParseError(f"datos truncados: {len(payload)} de {expected} bytes", field="payload")
    if len(payload) > expected:
        raise ParseError(f"{len(payload) - expected} bytes sobrantes tras los datos",
                         field="payload")
    return payload


def write_pgm(pixels):
    """
    Codifica una imagen de 8 bits como PGM binario.

    Args:
        pixels (numpy.ndarray): Arreglo uint8 de forma (alto, ancho).

    Returns:
        bytes: Archivo P5 con maxval 255.
    """
    pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
    height, width = pixels.shape
    header = b"%s\n%d %d\n%d\n" % (PGM_MAGIC, width, height, PGM_MAXVAL)
    return header + pixels.tobytes()


def read_pgm(data):
    """
    Decodifica un PGM binario.

    Args:
        data (bytes): Contenido del archivo.

    Returns:
        numpy.ndarray: Arreglo uint8 de forma (alto, ancho).

    Raises:
        ParseError: Si la cabecera está mal formada o sobran o faltan bytes.
    """
    magic, pos = _read_token(data, 0, "magic")
    if magic != PGM_MAGIC:
        raise ParseError(f"número mágico {magic!r}, se esperaba P5", field="magic")
    width, pos = _read_int(data, pos, "width")
    height, pos = _read_int(data, pos, "height")
    maxval, pos = _read_int(data, pos, "maxval")
    if maxval != PGM_MAXVAL:
        raise ParseError(f"maxval {maxval} no soportado, sólo 255", field="maxval")
    payload = _payload(data, pos, width * height, "maxval")
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width).copy()


def write_pfm(values):
    """
    Codifica un mapa flotante como PFM de un canal en little-endian.

    Las filas se guardan de abajo arriba, como manda el formato.

    Args:
        values (numpy.ndarray): Arreglo de forma (alto, ancho); se guarda en float32.

    Returns:
        bytes: Archivo Pf con escala −1.0.
    """
    values = np.asarray(values, dtype="<f4")
    height, width = values.shape
    header = b"%s\n%d %d\n%.1f\n" % (PFM_MAGIC, width, height, PFM_SCALE)
    return header + np.ascontiguousarray(values[::-1]).tobytes()


def read_pfm(data):
    """
    Decodifica un PFM de un canal en little-endian.

    Args:
        data (bytes): Contenido del archivo.

    Returns:
        numpy.ndarray: Arreglo float32 de forma (alto, ancho), fila 0 arriba.

    Raises:
        ParseError: Si la cabecera está mal formada, la escala no es negativa
            (big-endian) o sobran o faltan bytes.
    """
    magic, pos = _read_token(data, 0, "magic")
    if magic != PFM_MAGIC:
        raise ParseError(f"número mágico {magic!r}, se esperaba Pf", field="magic")
    width, pos = _read_int(data, pos, "width")
    height, pos = _read_int(data, pos, "height")
    token, pos = _read_token(data, pos, "scale")
    try:
        scale = float(token)
    except ValueError:
        raise ParseError(f"escala no numérica: {token!r}", field="scale") from None
    if not scale < 0:
        raise ParseError(f"escala {scale}: sólo se admite little-endian (escala negativa)",
                         field="scale")
    payload = _payload(data, pos, 4 * width * height, "scale")
    values = np.frombuffer(payload, dtype="<f4").reshape(height, width)
    return values[::-1].astype(np.float32)
