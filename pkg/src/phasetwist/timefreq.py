"""Short-time Fourier transforms, the Wigner distribution and the flip ``T``."""
from __future__ import annotations

import itertools
import math

import numpy as np

from ._interp import interp_matrix
from .grid import (
    GridModeMismatch,
    DualityMode,
    GridSpec,
    SampledField,
    SpaceTag,
    flip_indices,
    phase_grid_for,
)
from .spectral import _centered_dft, resample, symplectic_fourier

__all__ = ["stft", "symplectic_stft", "wigner", "flip_T", "NATIVE"]

#: pass as ``grid`` to keep an STFT on the euclidean lattice it is computed on
NATIVE = "native"


def _check_pair(f: SampledField, g: SampledField) -> None:
    if f.grid.dim != g.grid.dim or not f.grid.same_lattice(g.grid):
        raise ValueError("fields must live on the same grid")


def _shift_gather(n: int, dim: int) -> tuple[np.ndarray, ...]:
    """Index arrays for ``phi(y - x)`` with output axes ``(x..., y...)``."""
    k = np.arange(n)
    diff = (k[None, :] - k[:, None] + n // 2) % n  # [x, y] -> index of y - x
    out = []
    for ax in range(dim):
        shape = [1] * (2 * dim)
        shape[ax] = n
        shape[dim + ax] = n
        out.append(diff.reshape(shape))
    return tuple(out)


def stft(f: SampledField, window: SampledField, grid: GridSpec | str | None = None) -> SampledField:
    """Short-time Fourier transform ``V_window f``.

    ``V f(x, xi) = (2 pi)^{-d/2} int f(y) conj(window(y - x)) exp(-i<y, xi>) dy``

    Computed on the euclidean lattice of ``f`` (``x`` by exact lattice shifts,
    ``xi`` by the centered DFT) and then interpolated once onto ``grid``.
    ``grid=None`` selects :func:`~phasetwist.grid.phase_grid_for`;
    ``grid="native"`` skips the interpolation.
    """
    _check_pair(f, window)
    if f.grid.duality_mode is not DualityMode.EUCLIDEAN:
        raise GridModeMismatch("stft needs fields on a euclidean base grid")
    if not np.any(window.values):
        raise ValueError("window must not vanish identically")
    d, n = f.grid.dim, f.grid.n_per_axis
    shifted = np.conj(window.values[_shift_gather(n, d)])
    prod = f.values.reshape((1,) * d + f.grid.shape) * shifted
    for ax in range(d, 2 * d):
        prod = _centered_dft(prod, ax, -1)
    native = SampledField(f.grid.with_dim(2 * d), prod, SpaceTag.PHASE)
    if isinstance(grid, str):
        if grid != NATIVE:
            raise ValueError(f"unknown grid selector {grid!r}")
        return native
    target = phase_grid_for(f.grid) if grid is None else grid
    return resample(native, target)


def wigner(f: SampledField, g: SampledField, grid: GridSpec | None = None) -> SampledField:
    """Cross Wigner distribution in one dimension.

    ``W(x, xi) = (2 pi)^{-1/2} int f(x - y/2) conj(g(x + y/2)) exp(i y xi) dy``

    The ``y`` integral is a Riemann sum over the base lattice; the half-lattice
    arguments ``x -+ y/2`` are evaluated by trigonometric interpolation.
    """
    _check_pair(f, g)
    if f.grid.dim != 1:
        raise ValueError("wigner is implemented for d = 1")
    target = phase_grid_for(f.grid) if grid is None else grid
    y = f.grid.axis()
    x = target.axis()
    ip_minus = interp_matrix(f.grid, x[:, None] - y[None, :] / 2)
    ip_plus = interp_matrix(f.grid, x[:, None] + y[None, :] / 2)
    fv = ip_minus @ f.values
    gv = ip_plus @ g.values
    kern = np.exp(1j * np.outer(y, target.axis()))
    vals = (fv * np.conj(gv)) @ kern * (f.grid.spacing / math.sqrt(2 * math.pi))
    return SampledField(target, vals, SpaceTag.PHASE)


def flip_T(psi: SampledField) -> SampledField:
    """``(T psi)(x, xi) = psi(xi, -x)``."""
    dim = psi.grid.dim
    if dim % 2:
        raise ValueError("flip_T needs a phase-space field")
    d = dim // 2
    vals = psi.values
    idx = flip_indices(psi.grid.n_per_axis)
    # out[x, xi] = psi[xi, -x]: first flip the second block, then swap blocks
    for ax in range(d, dim):
        vals = np.take(vals, idx, axis=ax)
    vals = np.moveaxis(vals, tuple(range(d, dim)), tuple(range(d)))
    return psi.with_values(vals)


def symplectic_stft(a: SampledField, window: SampledField, points=None) -> SampledField | np.ndarray:
    """Symplectic STFT ``V_window a(X, Y) = F_sigma(a conj(window(. - X)))(Y)``.

    Without ``points`` the full field on the grid of dimension ``4d`` is
    returned (``d = 1`` and at most 16 nodes per axis).  With ``points``, an
    array of shape ``(P, 4d)`` holding ``(X, Y)`` rows, the transform is
    evaluated there by direct quadrature on the phase grid; on-lattice ``X``
    use exact shifts, others trigonometric interpolation of the window.
    """
    _check_pair(a, window)
    grid = a.grid
    if grid.duality_mode is not DualityMode.SYMPLECTIC or grid.dim % 2:
        raise GridModeMismatch("symplectic_stft needs fields on a symplectic phase grid")
    if points is None:
        return _symplectic_stft_full(a, window)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != 2 * grid.dim:
        raise ValueError(f"points must have {2 * grid.dim} columns")
    return _symplectic_stft_points(a, window, pts)


def _symplectic_stft_full(a: SampledField, window: SampledField) -> SampledField:
    grid = a.grid
    if grid.dim != 2:
        raise ValueError("full-field symplectic_stft supports d = 1 only")
    n = grid.n_per_axis
    if n > 16:
        raise ValueError("full-field symplectic_stft is limited to 16 nodes per axis; use points")
    gather = _shift_gather(n, 2)
    shifted = np.conj(window.values[gather])  # (X0, X1, W0, W1)
    out = np.empty((n,) * 4, dtype=complex)
    for i, j in itertools.product(range(n), range(n)):
        prod = SampledField(grid, a.values * shifted[i, j], SpaceTag.PHASE)
        out[i, j] = symplectic_fourier(prod).values
    return SampledField(grid.with_dim(4), out, SpaceTag.PHASE)


def _symplectic_stft_points(a: SampledField, window: SampledField, pts: np.ndarray, chunk: int = 256) -> np.ndarray:
    grid = a.grid
    d = grid.dim // 2
    n = grid.n_per_axis
    h = grid.spacing
    ax = grid.axis()
    X, Y = pts[:, : 2 * d], pts[:, 2 * d :]
    steps = X / h
    on_lattice = np.all(np.abs(steps - np.rint(steps)) < 1e-9, axis=1)
    const = (h * h / math.pi) ** d
    out = np.empty(len(pts), dtype=complex)
    conj_win = np.conj(window.values)
    if d != 1:
        raise ValueError("pointwise symplectic_stft supports d = 1 only")
    for start in range(0, len(pts), chunk):
        sl = slice(start, start + chunk)
        Xc, Yc, lat = X[sl], Y[sl], on_lattice[sl]
        wins = np.empty((len(Xc), n, n), dtype=complex)
        if np.any(lat):
            s = np.rint(Xc[lat] / h).astype(int)
            k = np.arange(n)
            i0 = (k[None, :] - s[:, 0:1]) % n
            i1 = (k[None, :] - s[:, 1:2]) % n
            wins[lat] = conj_win[i0[:, :, None], i1[:, None, :]]
        for p in np.flatnonzero(~lat):
            m0 = interp_matrix(grid, ax - Xc[p, 0])
            m1 = interp_matrix(grid, ax - Xc[p, 1])
            wins[p] = np.conj(m0 @ window.values @ m1.T)
        # exp(2i sigma(Y, W)) = exp(2i (w0 * eta - y * w1))
        u = np.exp(2j * Yc[:, 1:2] * ax[None, :])
        v = np.exp(-2j * Yc[:, 0:1] * ax[None, :])
        out[sl] = const * np.einsum("km,pkm,pk,pm->p", a.values, wins, u, v, optimize=True)
    return out
