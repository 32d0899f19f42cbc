"""Centered uniform grids, sampled fields and test-function generators.

A grid with ``N`` nodes of spacing ``h`` per axis has nodes
``x_k = -L + k*h`` with ``L = N*h/2``.  Two self-dual families are used:

* euclidean grids, ``N*h**2 = 2*pi``: the kernel ``exp(-i x xi)`` maps the
  grid onto itself, so the Fourier transform is an exact grid automorphism;
* symplectic grids, ``N*h**2 = pi``: the doubled kernel ``exp(2i sigma)``
  maps the grid onto itself.

Fields are periodic on the grid box.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

__all__ = [
    "GridModeMismatch",
    "DualityMode",
    "SpaceTag",
    "GridSpec",
    "SampledField",
    "Generator",
    "gaussian",
    "hermite",
    "linear_combo",
    "make_grid",
    "sample",
    "translate_modulate",
    "flip",
    "phase_grid_for",
    "operator_grid_for",
]

_DUALITY_TOL = 1e-12


class GridModeMismatch(ValueError):
    """A field lives on a grid of the wrong duality mode for the operation."""


class DualityMode(str, Enum):
    EUCLIDEAN = "euclidean"
    SYMPLECTIC = "symplectic"


class SpaceTag(str, Enum):
    BASE = "base"
    PHASE = "phase"


def _duality_product(mode: DualityMode) -> float:
    return 2.0 * math.pi if mode is DualityMode.EUCLIDEAN else math.pi


@dataclass(frozen=True)
class GridSpec:
    """Isotropic centered lattice ``{-L + k*h}^dim``."""

    dim: int
    n_per_axis: int
    spacing: float
    duality_mode: DualityMode = DualityMode.EUCLIDEAN

    def __post_init__(self):
        object.__setattr__(self, "duality_mode", DualityMode(self.duality_mode))
        if self.dim < 1:
            raise ValueError(f"grid dimension must be >= 1, got {self.dim}")
        if self.n_per_axis < 2 or self.n_per_axis % 2:
            raise ValueError(f"nodes per axis must be a positive even integer, got {self.n_per_axis}")
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")
        target = _duality_product(self.duality_mode)
        prod = self.n_per_axis * self.spacing**2
        if abs(prod - target) > _DUALITY_TOL * target:
            raise ValueError(
                f"{self.duality_mode.value} grid requires N*h^2 = {target:.15g}, got {prod:.15g}"
            )

    @property
    def half_width(self) -> float:
        return self.n_per_axis * self.spacing / 2.0

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_per_axis,) * self.dim

    @property
    def size(self) -> int:
        return self.n_per_axis**self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    def axis(self) -> np.ndarray:
        """Node coordinates of a single axis."""
        return -self.half_width + self.spacing * np.arange(self.n_per_axis)

    def mesh(self) -> list[np.ndarray]:
        """Broadcastable coordinate arrays, one per axis."""
        ax = self.axis()
        out = []
        for k in range(self.dim):
            shape = [1] * self.dim
            shape[k] = self.n_per_axis
            out.append(ax.reshape(shape))
        return out

    def points(self) -> np.ndarray:
        """All nodes as a ``(size, dim)`` array in row-major order."""
        grids = np.meshgrid(*([self.axis()] * self.dim), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)

    def with_dim(self, dim: int) -> "GridSpec":
        return GridSpec(dim, self.n_per_axis, self.spacing, self.duality_mode)

    def same_lattice(self, other: "GridSpec") -> bool:
        return (
            self.n_per_axis == other.n_per_axis
            and self.duality_mode is other.duality_mode
            and math.isclose(self.spacing, other.spacing, rel_tol=1e-12)
        )


def make_grid(dim: int, n: int, duality_mode: str | DualityMode = "euclidean") -> GridSpec:
    """Build the self-dual grid with ``n`` nodes per axis.

    The spacing follows from the duality constraint: ``sqrt(2*pi/n)`` for
    euclidean grids and ``sqrt(pi/n)`` for symplectic ones.

    >>> make_grid(1, 256).spacing  # doctest: +ELLIPSIS
    0.15666...
    """
    if dim < 1:
        raise ValueError(f"grid dimension must be >= 1, got {dim}")
    if n < 2 or n % 2:
        raise ValueError(f"nodes per axis must be a positive even integer, got {n}")
    mode = DualityMode(duality_mode)
    return GridSpec(dim, n, math.sqrt(_duality_product(mode) / n), mode)


def phase_grid_for(base: GridSpec) -> GridSpec:
    """Default phase-space grid paired with a euclidean base grid.

    In one dimension this is the symplectic grid with ``N/4`` nodes per axis
    (256 base nodes pair with 64 phase nodes).  For ``dim > 1`` the native
    euclidean lattice of dimension ``2*dim`` is returned.
    """
    if base.dim == 1:
        return make_grid(2, max(base.n_per_axis // 4, 2), DualityMode.SYMPLECTIC)
    return base.with_dim(2 * base.dim)


def operator_grid_for(phase: GridSpec) -> GridSpec:
    """Euclidean base grid on which operators with symbols on ``phase`` act."""
    if phase.dim % 2:
        raise ValueError("phase grid must have even dimension")
    return make_grid(phase.dim // 2, 4 * phase.n_per_axis, DualityMode.EUCLIDEAN)


@dataclass(frozen=True, eq=False)
class SampledField:
    """Complex samples of a function on a :class:`GridSpec`.

    ``values`` has shape ``grid.shape``; phase-space fields order their axes
    as ``(x_1..x_d, xi_1..xi_d)``.
    """

    grid: GridSpec
    values: np.ndarray
    space_tag: SpaceTag = SpaceTag.BASE

    def __post_init__(self):
        object.__setattr__(self, "space_tag", SpaceTag(self.space_tag))
        vals = np.array(self.values, dtype=complex, copy=True)
        if vals.size != self.grid.size:
            raise ValueError(f"expected {self.grid.size} values, got {vals.size}")
        vals = vals.reshape(self.grid.shape)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.space_tag is SpaceTag.PHASE and self.grid.dim % 2:
            raise ValueError("phase-space fields need an even dimension")

    @classmethod
    def zeros(cls, grid: GridSpec, space_tag=None) -> "SampledField":
        return cls(grid, np.zeros(grid.shape, dtype=complex), space_tag or _default_tag(grid))

    def with_values(self, values) -> "SampledField":
        return SampledField(self.grid, values, self.space_tag)

    def conj(self) -> "SampledField":
        return self.with_values(np.conj(self.values))

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.cell_volume))

    def inner(self, other: "SampledField") -> complex:
        """Discrete ``(self, other)_{L^2}``, conjugate-linear in ``other``."""
        _check_same_grid(self, other)
        return complex(np.sum(self.values * np.conj(other.values)) * self.grid.cell_volume)

    def _coerce(self, other):
        if isinstance(other, SampledField):
            _check_same_grid(self, other)
            return other.values
        return NotImplemented

    def __add__(self, other):
        vals = self._coerce(other)
        if vals is NotImplemented:
            return NotImplemented
        return self.with_values(self.values + vals)

    def __sub__(self, other):
        vals = self._coerce(other)
        if vals is NotImplemented:
            return NotImplemented
        return self.with_values(self.values - vals)

    def __neg__(self):
        return self.with_values(-self.values)

    def __mul__(self, other):
        if isinstance(other, SampledField):
            return self.with_values(self.values * self._coerce(other))
        if np.isscalar(other):
            return self.with_values(self.values * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other):
            return self.with_values(self.values / other)
        return NotImplemented


def _default_tag(grid: GridSpec) -> SpaceTag:
    return SpaceTag.PHASE if grid.duality_mode is DualityMode.SYMPLECTIC else SpaceTag.BASE


def _check_same_grid(a: SampledField, b: SampledField) -> None:
    if a.grid.dim != b.grid.dim or not a.grid.same_lattice(b.grid):
        raise ValueError("fields live on different grids")


# ---------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class Generator:
    """Test-function recipe.

    ``kind`` is one of ``"gaussian"``, ``"hermite"`` or ``"linear_combo"``.
    Gaussians are ``(pi w^2)^(-d/4) exp(-|x-c|^2/(2w^2) + i<x,m> + i*chirp*|x-c|^2)``,
    normalised in ``L^2``.
    """

    kind: str
    center: tuple[float, ...] = ()
    modulation: tuple[float, ...] = ()
    width: float = 1.0
    chirp: float = 0.0
    index: tuple[int, ...] = ()
    terms: tuple[tuple[complex, "Generator"], ...] = field(default=())

    def __post_init__(self):
        if self.kind == "gaussian":
            if not self.width > 0:
                raise ValueError("gaussian width must be positive")
            if len(self.center) != len(self.modulation):
                raise ValueError("center and modulation must have equal length")
        elif self.kind == "hermite":
            if not self.index or any(int(i) < 0 for i in self.index):
                raise ValueError("hermite index must be a non-empty tuple of non-negative integers")
        elif self.kind == "linear_combo":
            if not self.terms:
                raise ValueError("linear_combo needs at least one term")
            dims = {g.dim for _, g in self.terms}
            if len(dims) != 1:
                raise ValueError("linear_combo terms must share a dimension")
        else:
            raise ValueError(f"unknown generator kind {self.kind!r}")

    @property
    def dim(self) -> int:
        if self.kind == "gaussian":
            return len(self.center)
        if self.kind == "hermite":
            return len(self.index)
        return self.terms[0][1].dim

    def __call__(self, coords: Sequence[np.ndarray]) -> np.ndarray:
        if self.kind == "gaussian":
            d = len(coords)
            r2 = sum((c - c0) ** 2 for c, c0 in zip(coords, self.center))
            phase = sum(c * m for c, m in zip(coords, self.modulation))
            amp = (math.pi * self.width**2) ** (-d / 4)
            return amp * np.exp(-r2 / (2 * self.width**2) + 1j * (phase + self.chirp * r2))
        if self.kind == "hermite":
            out = 1.0
            for c, n in zip(coords, self.index):
                out = out * _hermite_function(int(n), c)
            return out
        return sum(coef * g(coords) for coef, g in self.terms)


def gaussian(center=(0.0,), modulation=None, width: float = 1.0, chirp: float = 0.0) -> Generator:
    center = tuple(float(c) for c in np.atleast_1d(center))
    if modulation is None:
        modulation = (0.0,) * len(center)
    modulation = tuple(float(m) for m in np.atleast_1d(modulation))
    return Generator("gaussian", center=center, modulation=modulation, width=float(width), chirp=float(chirp))


def hermite(*index: int) -> Generator:
    return Generator("hermite", index=tuple(int(i) for i in index))


def linear_combo(terms) -> Generator:
    return Generator("linear_combo", terms=tuple((complex(c), g) for c, g in terms))


def _hermite_function(n: int, x: np.ndarray) -> np.ndarray:
    # normalised Hermite functions by the three-term recurrence (stable for large n)
    prev = np.pi ** (-0.25) * np.exp(-(x**2) / 2)
    if n == 0:
        return prev
    cur = math.sqrt(2.0) * x * prev
    for k in range(1, n):
        prev, cur = cur, math.sqrt(2.0 / (k + 1)) * x * cur - math.sqrt(k / (k + 1)) * prev
    return cur


def sample(gen: Generator, grid: GridSpec, space_tag=None) -> SampledField:
    """Evaluate ``gen`` at every node of ``grid``."""
    if gen.dim != grid.dim:
        raise ValueError(f"generator has dimension {gen.dim}, grid has {grid.dim}")
    values = np.broadcast_to(gen(grid.mesh()), grid.shape)
    return SampledField(grid, values, space_tag or _default_tag(grid))


# ---------------------------------------------------------------------------
# elementary symmetries


def lattice_steps(grid: GridSpec, offset, *, tol: float = 1e-9) -> np.ndarray:
    """Integer node counts for an on-lattice offset vector; raises otherwise."""
    offset = np.atleast_1d(np.asarray(offset, dtype=float))
    if offset.shape != (grid.dim,):
        raise ValueError(f"offset must have length {grid.dim}")
    steps = offset / grid.spacing
    rounded = np.rint(steps)
    if np.any(np.abs(steps - rounded) > tol):
        raise ValueError(f"offset {offset.tolist()} is not a multiple of the spacing {grid.spacing}")
    return rounded.astype(int)


def translate_modulate(f: SampledField, x0, xi0) -> SampledField:
    """Return ``exp(i<., xi0>) f(. - x0)`` with periodic wraparound.

    ``x0`` must be a lattice vector; no interpolation is performed.
    """
    steps = lattice_steps(f.grid, x0)
    xi0 = np.atleast_1d(np.asarray(xi0, dtype=float))
    if xi0.shape != (f.grid.dim,):
        raise ValueError(f"modulation must have length {f.grid.dim}")
    vals = np.roll(f.values, tuple(steps), axis=tuple(range(f.grid.dim)))
    phase = sum(c * m for c, m in zip(f.grid.mesh(), xi0))
    return f.with_values(vals * np.exp(1j * phase))


def flip_indices(n: int) -> np.ndarray:
    """Index map ``k -> -k mod n``; node ``-L`` maps to itself."""
    return (-np.arange(n)) % n


def flip(a: SampledField) -> SampledField:
    """``a(-X)`` on the centered lattice."""
    idx = flip_indices(a.grid.n_per_axis)
    vals = a.values
    for ax in range(a.grid.dim):
        vals = np.take(vals, idx, axis=ax)
    return a.with_values(vals)
