"""Band-limited periodic interpolation on centered lattices."""
from __future__ import annotations

import numpy as np

from .grid import GridSpec


def dirichlet(u: np.ndarray, n: int, period: float) -> np.ndarray:
    """Periodic sinc for ``n`` (even) nodes, Nyquist term split as a cosine.

    Equals 1 at multiples of ``period`` and 0 at the other lattice offsets.
    """
    s = np.pi * np.asarray(u, dtype=float) / period
    sin_s = np.sin(s)
    small = np.abs(sin_s) < 1e-14
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.sin(n * s) * np.cos(s) / (n * np.where(small, 1.0, sin_s))
    # at u = k*period the limit is cos(n*k*pi) = 1 for even n
    return np.where(small, 1.0, out)


def interp_matrix(grid: GridSpec, targets: np.ndarray, *, outside_zero: bool = False) -> np.ndarray:
    """Rows of weights mapping the 1D node values of ``grid`` to ``targets``.

    With ``outside_zero`` the rows for targets outside ``[-L, L)`` vanish,
    treating the field as zero beyond its box instead of periodic.
    """
    targets = np.asarray(targets, dtype=float)
    nodes = grid.axis()
    period = grid.n_per_axis * grid.spacing
    mat = dirichlet(targets[..., None] - nodes, grid.n_per_axis, period)
    if outside_zero:
        L = grid.half_width
        eps = 1e-9 * grid.spacing
        inside = (targets >= -L - eps) & (targets < L - eps)
        mat = mat * inside[..., None]
    return mat


def evaluate_1d(grid: GridSpec, values: np.ndarray, targets: np.ndarray, axis: int = -1) -> np.ndarray:
    """Interpolate ``values`` along ``axis`` at arbitrary target coordinates."""
    mat = interp_matrix(grid, targets)
    moved = np.moveaxis(values, axis, -1)
    return np.moveaxis(moved @ mat.T, -1, axis)
