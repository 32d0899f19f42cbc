"""Weighted mixed Lebesgue norms and the modulation / Wiener amalgam norms."""
from __future__ import annotations

import numpy as np

from .grid import GridSpec, SampledField, gaussian, sample
from .timefreq import stft
from .weights import Exponent, Weight

__all__ = ["mixed_norm", "mixed_norm_array", "modulation_norm", "wiener_norm", "weighted_lp_norm", "lp_reduce"]


def lp_reduce(arr: np.ndarray, axes: tuple[int, ...], exponent, cell: float) -> np.ndarray:
    """``(sum |arr|^p * cell)^{1/p}`` over ``axes``; a maximum for ``p = inf``.

    ``arr`` is assumed nonnegative.
    """
    r = Exponent.of(exponent).r
    if not axes:
        return arr
    if r == 0:
        return np.max(arr, axis=axes)
    p = 1.0 / float(r)
    if p == 1.0:
        return np.sum(arr, axis=axes) * cell
    if p == 2.0:
        return np.sqrt(np.sum(arr * arr, axis=axes) * cell)
    # scale by the max to keep large p finite
    top = np.max(arr, axis=axes, keepdims=True)
    safe = np.where(top > 0, top, 1.0)
    s = np.sum((arr / safe) ** p, axis=axes) * cell
    return np.squeeze(safe, axis=axes) * s ** (1.0 / p)


def _weighted_abs(F: SampledField, weight) -> np.ndarray:
    """``|F| * weight`` where ``weight`` is a :class:`Weight`, an array of
    node values broadcastable to the grid, or None."""
    absF = np.abs(F.values)
    if weight is None:
        return absF
    if isinstance(weight, Weight):
        return absF if weight.is_trivial else absF * weight.on_grid(F.grid)
    return absF * np.asarray(weight, dtype=float)


def mixed_norm(F: SampledField, p, q, order: int | str = 1, weight=None) -> float:
    """Weighted mixed norm of a field on ``R^{2n}``.

    The first ``n`` axes form the ``x`` block and the last ``n`` the ``xi``
    block.  ``order=1`` takes the ``L^p`` norm in ``x`` first and then the
    ``L^q`` norm in ``xi``; ``order=2`` takes ``L^q`` in ``xi`` first and then
    ``L^p`` in ``x``.  ``weight`` is a :class:`Weight` or an array of node
    values.
    """
    if F.grid.dim % 2:
        raise ValueError("mixed_norm needs an even-dimensional field")
    return mixed_norm_array(_weighted_abs(F, weight), F.grid.spacing, p, q, order)


def mixed_norm_array(A: np.ndarray, spacing: float, p, q, order: int | str = 1) -> float:
    """:func:`mixed_norm` on a precomputed nonnegative array ``|F| w``."""
    dim = A.ndim
    if dim % 2:
        raise ValueError("mixed norms need an even number of axes")
    order = _order(order)
    n = dim // 2
    cell = spacing**n
    rest = tuple(range(n))
    if order == 1:
        inner = lp_reduce(A, tuple(range(n)), p, cell)
        return float(lp_reduce(inner, rest, q, cell))
    inner = lp_reduce(A, tuple(range(n, dim)), q, cell)
    return float(lp_reduce(inner, rest, p, cell))


def _order(order) -> int:
    if order in (1, "1", "k1"):
        return 1
    if order in (2, "2", "k2"):
        return 2
    raise ValueError(f"order must be 1 or 2, got {order!r}")


def default_window(grid: GridSpec) -> SampledField:
    """Unit Gaussian ``pi^{-d/4} exp(-|x|^2/2)`` on ``grid``."""
    return sample(gaussian((0.0,) * grid.dim), grid)


def modulation_norm(f: SampledField, p, q, weight: Weight | None = None, window: SampledField | None = None,
                    grid: GridSpec | str | None = None) -> float:
    """``||V_window f||`` in the order-1 mixed norm (STFT on ``grid``)."""
    if window is None:
        window = default_window(f.grid)
    return mixed_norm(stft(f, window, grid), p, q, 1, weight)


def wiener_norm(f: SampledField, p, q, weight: Weight | None = None, window: SampledField | None = None,
                grid: GridSpec | str | None = None) -> float:
    """``||V_window f||`` in the order-2 mixed norm (STFT on ``grid``)."""
    if window is None:
        window = default_window(f.grid)
    return mixed_norm(stft(f, window, grid), p, q, 2, weight)


def weighted_lp_norm(f: SampledField, p, weight=None) -> float:
    """``(sum |f w|^p h^dim)^{1/p}``, the maximum for ``p = inf``."""
    A = _weighted_abs(f, weight)
    return float(lp_reduce(A, tuple(range(f.grid.dim)), p, f.grid.cell_volume))
