"""Bounded one-dimensional maximization: coarse grid, then golden-section refinement."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section_max(func: Callable[[float], float], a: float, b: float, xtol: float = 1e-6):
    """Maximize a unimodal ``func`` on ``[a, b]``; returns ``(x, func(x))``."""
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = func(d)
    x = (a + b) / 2
    return x, func(x)


def grid_then_golden(
    func: Callable[[np.ndarray], np.ndarray],
    grid: np.ndarray,
    xtol: float = 1e-6,
):
    """Global search over ``grid`` (vectorized ``func``), refined between the neighbours of the best point.

    The returned value is never below the best grid value, so grid points
    (in particular the endpoints) are always honoured.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(func(grid), dtype=float)
    i = int(np.argmax(values))
    best_x, best_val = float(grid[i]), float(values[i])
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    if hi > lo:
        x, val = golden_section_max(lambda t: float(func(np.array(t))), lo, hi, xtol)
        if val > best_val:
            best_x, best_val = float(x), float(val)
    return best_x, best_val
