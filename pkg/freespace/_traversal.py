"""
Módulo con los recorridos de rayos sobre la malla de ocupación, compilados con numba.

Los rayos se trazan en coordenadas continuas de celda (u hacia delante, v
hacia la izquierda, en unidades de celda y con el robot en el origen). La
celda que contiene a (u, v) es (floor(u + 0.5), floor(v + 0.5)). El recorrido
es el de Amanatides-Woo y visita cada celda que atraviesa el segmento.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _walk_setup(start, end):
    # Desplaza medio celda para que las fronteras caigan en enteros
    p0 = start + 0.5
    p1 = end + 0.5
    cell = int(math.floor(p0))
    delta = p1 - p0
    if delta > 0:
        step = 1
        t_delta = 1.0 / delta
        t_max = (cell + 1 - p0) * t_delta
    elif delta < 0:
        step = -1
        t_delta = -1.0 / delta
        t_max = (p0 - cell) * t_delta
    else:
        step = 0
        t_delta = np.inf
        t_max = np.inf
    return cell, int(math.floor(p1)), step, t_delta, t_max


@njit(cache=True)
def carve_free(start_u, start_v, end_u, end_v, origin_row, origin_col, observable, free):
    """
    Marca como libres las celdas que atraviesa cada rayo antes de su celda final.

    Args:
        start_u (float): Origen de los rayos, eje frontal.
        start_v (float): Origen de los rayos, eje lateral.
        end_u (numpy.ndarray): Extremos de los rayos, eje frontal.
        end_v (numpy.ndarray): Extremos de los rayos, eje lateral.
        origin_row (int): Fila de la celda del robot.
        origin_col (int): Columna de la celda del robot.
        observable (numpy.ndarray): Celdas que el sensor puede declarar libres.
        free (numpy.ndarray): Votos de espacio libre; se modifica en el sitio.
    """
    n_rows, n_cols = free.shape
    for k in range(end_u.shape[0]):
        iu, eu, su, du, tu = _walk_setup(start_u, end_u[k])
        iv, ev, sv, dv, tv = _walk_setup(start_v, end_v[k])
        steps = abs(eu - iu) + abs(ev - iv)
        for _ in range(steps):
            row = origin_row - iu
            col = origin_col - iv
            if row < 0 or row >= n_rows or col < 0 or col >= n_cols:
                break
            if observable[row, col]:
                free[row, col] = True
            if tu < tv:
                iu += su
                tu += du
            else:
                iv += sv
                tv += dv


@njit(cache=True)
def shadowed_cells(state, origin_row, origin_col, free_value, occupied_value):
    """
    Detecta las celdas libres ocultas tras un obstáculo visto desde el robot.

    Args:
        state (numpy.ndarray): Estados de la malla (uint8).
        origin_row (int): Fila de la celda del robot.
        origin_col (int): Columna de la celda del robot.
        free_value (int): Valor de las celdas libres.
        occupied_value (int): Valor de las celdas ocupadas.

    Returns:
        numpy.ndarray: Máscara de celdas libres con un obstáculo entre ellas y el robot.
    """
    n_rows, n_cols = state.shape
    shadow = np.zeros((n_rows, n_cols), dtype=np.bool_)
    for row in range(n_rows):
        for col in range(n_cols):
            if state[row, col] != free_value:
                continue
            target_u = float(origin_row - row)
            target_v = float(origin_col - col)
            iu, eu, su, du, tu = _walk_setup(0.0, target_u)
            iv, ev, sv, dv, tv = _walk_setup(0.0, target_v)
            steps = abs(eu - iu) + abs(ev - iv)
            for step in range(steps):
                if step > 0:
                    r = origin_row - iu
                    c = origin_col - iv
                    if r >= 0 and r < n_rows and c >= 0 and c < n_cols and state[r, c] == occupied_value:
                        shadow[row, col] = True
                        break
                if tu < tv:
                    iu += su
                    tu += du
                else:
                    iv += sv
                    tv += dv
    return shadow
