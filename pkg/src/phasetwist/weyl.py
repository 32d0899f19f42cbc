"""Twisted convolution, pseudo-differential quantization and the Weyl product.

Symbols live on a symplectic phase grid and are read as their band-limited
periodic interpolants.  Operators act on the euclidean base grid returned by
:func:`~phasetwist.grid.operator_grid_for` unless another one is given.

The ``t``-quantization kernel used here is::

    K_{t,a}(x, y) = (2 pi)^{-d/2} (F_2^{-1} a)((1-t) x + t y, x - y)

which is what the oscillatory integral for ``Op_t(a)`` produces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._interp import interp_matrix
from .grid import (
    GridModeMismatch,
    DualityMode,
    GridSpec,
    SampledField,
    SpaceTag,
    operator_grid_for,
)
from .spectral import symplectic_fourier

__all__ = [
    "KernelMatrix",
    "twisted_conv",
    "quantize_kernel",
    "dequantize_weyl",
    "apply_op",
    "weyl_product",
]


def _check_symbol_pair(a: SampledField, b: SampledField) -> GridSpec:
    if a.grid.duality_mode is not DualityMode.SYMPLECTIC or b.grid.duality_mode is not DualityMode.SYMPLECTIC:
        raise GridModeMismatch("symbols must live on a symplectic phase grid")
    if a.grid.dim != b.grid.dim or not a.grid.same_lattice(b.grid):
        raise ValueError("symbols must live on the same phase grid")
    if a.grid.dim % 2:
        raise ValueError("symbols need an even-dimensional grid")
    return a.grid


# ---------------------------------------------------------------------------
# twisted convolution


@lru_cache(maxsize=8)
def _wrap_difference(n: int) -> np.ndarray:
    k = np.arange(n)
    return (k[:, None] - k[None, :] + n // 2) % n  # [k, n] -> index of x_k - y_n


def _twisted_direct(a: np.ndarray, b: np.ndarray, grid: GridSpec) -> np.ndarray:
    n = grid.n_per_axis
    h = grid.spacing
    ax = grid.axis()
    diff = _wrap_difference(n)
    # exp(2i sigma(X, Y)) = exp(2i y xi) exp(-2i x eta)
    e_y_xi = np.exp(2j * np.outer(ax, ax))  # [n(y), m(xi)]
    e_x_eta = np.exp(-2j * np.outer(ax, ax))  # [k(x), j(eta)]
    const = math.sqrt(2.0 / math.pi) * h * h
    out = np.empty((n, n), dtype=complex)
    a_mj = a[:, diff]  # [row, m, j] -> a[row, m - j]
    for k in range(n):
        shifted = a_mj[diff[k]]  # [n, m, j] -> a[k - n, m - j]
        bk = b * e_x_eta[k][None, :]  # [n, j]
        inner = np.einsum("nmj,nj->nm", shifted, bk)
        out[k] = np.einsum("nm,nm->m", inner, e_y_xi)
    return const * out


def twisted_conv(a: SampledField, b: SampledField, method: str = "direct") -> SampledField:
    """Twisted convolution ``(2/pi)^{d/2} int a(X - Y) b(Y) exp(2i sigma(X, Y)) dY``.

    ``method="direct"`` is the O(M^2) lattice quadrature with periodic
    wraparound; ``method="kernel"`` goes through operator composition as
    ``(2 pi)^{d/2} a # F_sigma(b)``.
    """
    grid = _check_symbol_pair(a, b)
    if grid.dim != 2:
        raise ValueError("twisted_conv is implemented for d = 1")
    if method == "direct":
        vals = _twisted_direct(a.values, b.values, grid)
        return SampledField(grid, vals, SpaceTag.PHASE)
    if method == "kernel":
        prod = weyl_product(a, symplectic_fourier(b), method="kernel")
        return prod * math.sqrt(2 * math.pi)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# quantization


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Sampled operator kernel ``K(x_i, y_j)`` on a base grid."""

    grid: GridSpec
    entries: np.ndarray

    def __post_init__(self):
        n = self.grid.size
        ent = np.asarray(self.entries, dtype=complex)
        if ent.shape != (n, n):
            raise ValueError(f"kernel must be {n} x {n}, got {ent.shape}")
        ent = ent.copy()
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)

    @property
    def weight(self) -> float:
        return self.grid.cell_volume

    def apply(self, f: SampledField) -> SampledField:
        if not f.grid.same_lattice(self.grid) or f.grid.dim != self.grid.dim:
            raise ValueError("field and kernel grids differ")
        vals = self.entries @ (f.values.ravel() * self.weight)
        return SampledField(self.grid, vals.reshape(self.grid.shape), SpaceTag.BASE)

    def compose(self, other: "KernelMatrix") -> "KernelMatrix":
        """Kernel of ``self`` after ``other``."""
        if not other.grid.same_lattice(self.grid):
            raise ValueError("kernel grids differ")
        return KernelMatrix(self.grid, self.entries @ other.entries * self.weight)


def _check_t(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return t


def _symbol_1d(a: SampledField) -> GridSpec:
    if a.grid.duality_mode is not DualityMode.SYMPLECTIC or a.grid.dim != 2:
        raise GridModeMismatch("symbols must live on a 2D symplectic phase grid (d = 1)")
    return a.grid


def _inverse_partial(a: SampledField) -> tuple[np.ndarray, np.ndarray]:
    """``(F_2^{-1} a)(x_k, w)`` sampled on its natural ``w`` lattice.

    Returns the values ``[k, l]`` and the ``w`` nodes.  The xi-sum
    ``(2 pi)^{-1/2} h sum_n a(x_k, xi_n) exp(i w xi_n)`` is a trigonometric
    polynomial in ``w`` with period ``2 pi / h``; sampling it at
    ``w_l = -L_w + l * 2 pi / (N h)`` is one FFT.
    """
    grid = a.grid
    n, h = grid.n_per_axis, grid.spacing
    xi = grid.axis()
    dw = 2 * math.pi / (n * h)
    w = -math.pi / h + dw * np.arange(n)
    # exp(i w_l xi_n) = exp(i w_l xi_0) exp(i w_l n h) with w_l h n = -pi n + 2 pi l n / N
    alt = 1.0 - 2.0 * (np.arange(n) % 2)
    pre = a.values * alt[None, :]
    vals = np.fft.ifft(pre, axis=1) * n
    vals = vals * np.exp(1j * w * xi[0])[None, :]
    return vals * (h / math.sqrt(2 * math.pi)), w


def _w_interp(n: int, h_xi: float, xi0: float, w_nodes: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Exact evaluation weights for the trigonometric polynomial in ``w``.

    The polynomial has frequencies ``xi_n = xi0 + n h_xi``; its values at the
    ``w`` nodes determine it, so ``p(t) = sum_l p(w_l) c_l(t)``.
    """
    period = 2 * math.pi / h_xi
    u = targets[..., None] - w_nodes
    # sum_n exp(i u xi_n) / n = exp(i u (xi0 + (n-1) h/2)) sin(n u h/2) / (n sin(u h/2))
    s = u * h_xi / 2
    sin_s = np.sin(s)
    small = np.abs(sin_s) < 1e-14
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.sin(n * s) / (n * np.where(small, 1.0, sin_s))
    # limit at u = m * period: sin(n s)/(n sin s) -> cos(n s)/cos(s) = (-1)^{m(n-1)}
    m = np.rint(u / period)
    lim = np.where((m * (n - 1)) % 2 == 0, 1.0, -1.0)
    ratio = np.where(small, lim, ratio)
    return ratio * np.exp(1j * u * (xi0 + (n - 1) * h_xi / 2))


def quantize_kernel(a: SampledField, t: float, grid: GridSpec | None = None) -> KernelMatrix:
    """Kernel of ``Op_t(a)`` on ``grid`` by the partial-Fourier route.

    First ``F_2^{-1} a`` is formed on the phase grid by one FFT in ``xi``, then
    evaluated at ``((1 - t) x + t y, x - y)``: trigonometric interpolation in
    the first slot and exact trigonometric-polynomial evaluation in the second.
    """
    t = _check_t(t)
    pgrid = _symbol_1d(a)
    grid = operator_grid_for(pgrid) if grid is None else grid
    if grid.dim != 1:
        raise ValueError("operator grid must be one-dimensional")
    x = grid.axis()
    partial, w_nodes = _inverse_partial(a)
    n = pgrid.n_per_axis
    xi = pgrid.axis()
    z = (1 - t) * x[:, None] + t * x[None, :]
    w = x[:, None] - x[None, :]
    zw_unique, z_inv = np.unique(np.round(z, 12), return_inverse=True)
    w_unique, w_inv = np.unique(np.round(w, 12), return_inverse=True)
    z_mat = interp_matrix(pgrid, zw_unique)  # [zu, k]
    w_mat = _w_interp(n, pgrid.spacing, xi[0], w_nodes, w_unique)  # [wu, l]
    # B[zu, l] = partial interpolated in x; then K = B[z_ij] . w_mat[w_ij]
    b = z_mat @ partial
    z_inv = z_inv.reshape(z.shape)
    w_inv = w_inv.reshape(w.shape)
    ker = np.einsum("ijl,ijl->ij", b[z_inv], w_mat[w_inv], optimize=True)
    return KernelMatrix(grid, ker / math.sqrt(2 * math.pi))


def dequantize_weyl(kernel: KernelMatrix, pgrid: GridSpec) -> SampledField:
    """Weyl symbol ``a(z, xi) = int K(z + w/2, z - w/2) exp(-i w xi) dw`` on ``pgrid``.

    Symbols sampled at the ``xi`` nodes of ``pgrid`` quantize to kernels that
    are periodic in ``w = x - y`` with period ``2 pi / h_xi``, so ``w`` runs
    over exactly one period (``2 N`` equispaced nodes), which inverts the
    quantization exactly.  The kernel is interpolated trigonometrically in
    both arguments.
    """
    grid = kernel.grid
    z = pgrid.axis()
    xi = pgrid.axis()
    m = 2 * pgrid.n_per_axis
    period = 2 * math.pi / pgrid.spacing
    dw = period / m
    w = -period / 2 + dw * np.arange(m)
    p = (z[:, None] + w[None, :] / 2).ravel()
    q = (z[:, None] - w[None, :] / 2).ravel()
    ip = interp_matrix(grid, p)
    iq = interp_matrix(grid, q)
    vals = np.einsum("pk,pk->p", ip @ kernel.entries, iq).reshape(len(z), len(w))
    sym = vals @ np.exp(-1j * np.outer(w, xi)) * dw
    return SampledField(pgrid, sym, SpaceTag.PHASE)


def apply_op(a: SampledField, t: float, f: SampledField, method: str = "kernel") -> SampledField:
    """Apply ``Op_t(a)`` to ``f``.

    ``method="kernel"`` multiplies by :func:`quantize_kernel`;
    ``method="quadrature"`` evaluates the double integral
    ``(2 pi)^{-d} int int a((1-t)x + t y, xi) f(y) exp(i<x - y, xi>) dy dxi``
    directly over the base lattice and the symbol's ``xi`` nodes.
    """
    t = _check_t(t)
    pgrid = _symbol_1d(a)
    if f.grid.dim != 1 or f.grid.duality_mode is not DualityMode.EUCLIDEAN:
        raise GridModeMismatch("f must live on a 1D euclidean base grid")
    if method == "kernel":
        return quantize_kernel(a, t, f.grid).apply(f)
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    x = f.grid.axis()
    xi = pgrid.axis()
    hx, hxi = f.grid.spacing, pgrid.spacing
    e_y = np.exp(-1j * np.outer(x, xi))  # [j, n]
    out = np.empty(len(x), dtype=complex)
    for i, xv in enumerate(x):
        z = (1 - t) * xv + t * x
        sym = interp_matrix(pgrid, z) @ a.values  # [j, n]
        phase = np.exp(1j * xv * xi)  # [n]
        out[i] = np.sum(sym * e_y * phase[None, :] * f.values[:, None])
    out *= hx * hxi / (2 * math.pi)
    return SampledField(f.grid, out, SpaceTag.BASE)


def weyl_product(a: SampledField, b: SampledField, method: str = "twist") -> SampledField:
    """Weyl product ``a # b``, the symbol of ``a^w(x, D) b^w(x, D)``.

    ``method="kernel"`` composes Weyl-quantized kernels and de-quantizes;
    ``method="twist"`` uses ``(2 pi)^{-d/2} a *_sigma F_sigma(b)`` with the
    direct twisted convolution.
    """
    pgrid = _check_symbol_pair(a, b)
    if pgrid.dim != 2:
        raise ValueError("weyl_product is implemented for d = 1")
    if method == "twist":
        return twisted_conv(a, symplectic_fourier(b), "direct") / math.sqrt(2 * math.pi)
    if method == "kernel":
        ka = quantize_kernel(a, 0.5)
        kb = quantize_kernel(b, 0.5)
        return dequantize_weyl(ka.compose(kb), pgrid)
    raise ValueError(f"unknown method {method!r}")
