"""Fourier, partial Fourier and symplectic Fourier transforms on self-dual grids.

Normalisations::

    F f(xi)       = (2 pi)^{-d/2} int f(x) exp(-i <x, xi>) dx
    F_sigma a(X)  = pi^{-d}       int a(Y) exp(2 i sigma(X, Y)) dY

with ``sigma((x, xi), (y, eta)) = <y, xi> - <x, eta>``.  On a euclidean grid
``x_k = -L + k h`` with ``N h^2 = 2 pi`` the Riemann sum of the first kernel
is a DFT up to the alternating vector ``(-1)^k`` applied before and after the
FFT and the constant ``(-1)^{N/2}``; the same holds for ``exp(2i u v)`` on a
symplectic grid.  Both 1D transforms are then exactly unitary.
"""
from __future__ import annotations

import os

import numpy as np
import scipy.fft

from ._interp import interp_matrix
from .grid import DualityMode, GridModeMismatch, GridSpec, SampledField, SpaceTag

__all__ = ["fourier", "partial_fourier", "symplectic_fourier", "resample", "fft_workers"]


def fft_workers() -> int:
    """Worker cap from ``PHASETWIST_THREADS`` (default 1)."""
    raw = os.environ.get("PHASETWIST_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(n, 1)


def _alternating(n: int) -> np.ndarray:
    return 1.0 - 2.0 * (np.arange(n) % 2)


def _centered_dft(values: np.ndarray, axis: int, sign: int) -> np.ndarray:
    """Unitary centered DFT along ``axis``.

    With ``sign=-1`` this is ``h/sqrt(2 pi) sum_k v_k exp(-i x_k x_n)`` on a
    euclidean grid and ``h/sqrt(pi) sum_k v_k exp(-2i x_k x_n)`` on a
    symplectic one; ``sign=+1`` conjugates the kernel.
    """
    n = values.shape[axis]
    shape = [1] * values.ndim
    shape[axis] = n
    alt = _alternating(n).reshape(shape)
    const = -1.0 if (n // 2) % 2 else 1.0
    transform = scipy.fft.fft if sign < 0 else scipy.fft.ifft
    out = transform(values * alt, axis=axis, norm="ortho", workers=fft_workers())
    return const * alt * out


def _require_mode(grid: GridSpec, mode: DualityMode, what: str) -> None:
    if grid.duality_mode is not mode:
        raise GridModeMismatch(f"{what} needs a {mode.value} grid, got {grid.duality_mode.value}")


def fourier(f: SampledField, inverse: bool = False) -> SampledField:
    """Fourier transform of ``f`` over all axes (exact discrete inverse pair)."""
    _require_mode(f.grid, DualityMode.EUCLIDEAN, "fourier")
    vals = f.values
    for ax in range(f.grid.dim):
        vals = _centered_dft(vals, ax, +1 if inverse else -1)
    return f.with_values(vals)


def partial_fourier(F: SampledField, block: str = "second", inverse: bool = False) -> SampledField:
    """Fourier transform over the first or second half of the axes only."""
    dim = F.grid.dim
    if dim % 2:
        raise ValueError("partial_fourier needs an even-dimensional field")
    _require_mode(F.grid, DualityMode.EUCLIDEAN, "partial_fourier")
    d = dim // 2
    if block == "first":
        axes = range(d)
    elif block == "second":
        axes = range(d, dim)
    else:
        raise ValueError(f"block must be 'first' or 'second', got {block!r}")
    vals = F.values
    for ax in axes:
        vals = _centered_dft(vals, ax, +1 if inverse else -1)
    return F.with_values(vals)


def symplectic_fourier(a: SampledField) -> SampledField:
    """Symplectic Fourier transform; an involution on the symplectic grid.

    The ``y`` axes carry ``exp(+2i<y, xi>)`` and become the output ``xi``
    axes, the ``eta`` axes carry ``exp(-2i<x, eta>)`` and become the output
    ``x`` axes.
    """
    _require_mode(a.grid, DualityMode.SYMPLECTIC, "symplectic_fourier")
    dim = a.grid.dim
    if dim % 2:
        raise ValueError("symplectic_fourier needs an even-dimensional field")
    d = dim // 2
    vals = a.values
    for ax in range(d):
        vals = _centered_dft(vals, ax, +1)
    for ax in range(d, dim):
        vals = _centered_dft(vals, ax, -1)
    vals = np.moveaxis(vals, tuple(range(d, dim)), tuple(range(d)))
    return SampledField(a.grid, vals, SpaceTag.PHASE)


def resample(f: SampledField, target: GridSpec) -> SampledField:
    """Trigonometric interpolation of ``f`` onto the nodes of ``target``.

    Inside the source box the band-limited periodic interpolant is used;
    target nodes outside the source box receive zero.
    """
    if f.grid.dim != target.dim:
        raise ValueError(f"dimension mismatch: field {f.grid.dim}, target {target.dim}")
    if f.grid.same_lattice(target):
        return SampledField(target, f.values, f.space_tag)
    mat = interp_matrix(f.grid, target.axis(), outside_zero=True)
    vals = f.values
    for ax in range(target.dim):
        vals = np.moveaxis(np.moveaxis(vals, ax, -1) @ mat.T, -1, ax)
    return SampledField(target, vals, f.space_tag)
