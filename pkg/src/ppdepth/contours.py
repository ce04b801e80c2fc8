"""Ternary depth grids for two-event realizations.

The lattice covers the IET simplex ``u1 + u2 + u3 = total`` at spacing
``total / resolution``.  Each row carries the simplex coordinates, the
Helmert ILR coordinates (``nan`` on the boundary, where the transform is
undefined) and the conditional depth.
"""
from __future__ import annotations

from itertools import permutations
from typing import Callable

import numpy as np

from .geometry import PointProcess, TimeDomain, ilr


def lattice(resolution: int) -> np.ndarray:
    """Integer barycentric triples ``(i, j, l)`` with ``i + j + l == resolution``."""
    if resolution < 1:
        raise ValueError("resolution must be positive")
    return np.array([(i, j, resolution - i - j)
                     for i in range(resolution + 1) for j in range(resolution + 1 - i)])


def contour_grid(cond: Callable[[PointProcess], float], domain: TimeDomain,
                 resolution: int = 60) -> np.ndarray:
    """Rows ``(u1, u2, u3, ilr_x, ilr_y, depth)`` over the barycentric lattice."""
    total = domain.length
    idx = lattice(resolution)
    rows = np.empty((idx.shape[0], 6))
    for n, (i, j, l) in enumerate(idx):
        u = np.array([i, j, l], dtype=float) * (total / resolution)
        s1 = domain.t1 + u[0]
        # events from lattice indices so boundary points stay exactly on the boundary
        s2 = domain.t1 + (i + j) * (total / resolution) if l else domain.t2
        p = PointProcess(domain, [s1, s2])
        xy = ilr(u) if (i and j and l) else (np.nan, np.nan)
        rows[n] = (*u, *xy, cond(p))
    return rows


def symmetry_gap(grid: np.ndarray, resolution: int) -> float:
    """Largest depth difference between corner-permuted copies of a lattice point."""
    idx = np.rint(grid[:, :3] / grid[:, :3].sum(axis=1, keepdims=True) * resolution).astype(int)
    depth = {tuple(t): d for t, d in zip(idx, grid[:, 5])}
    gap = 0.0
    for t, d in depth.items():
        for perm in permutations(t):
            gap = max(gap, abs(depth[perm] - d))
    return gap
