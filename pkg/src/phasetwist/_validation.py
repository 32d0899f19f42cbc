"""Input validation helpers shared by the estimators and the CLI."""
from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .grid import DualityMode, GridModeMismatch, GridSpec, SampledField, SpaceTag
from .weights import Exponent

__all__ = ["check_field", "check_fields", "check_exponent", "check_mode", "as_output"]


def check_mode(grid: GridSpec, mode: DualityMode | str | None, what: str = "field") -> None:
    if mode is None:
        return
    mode = DualityMode(mode)
    if grid.duality_mode is not mode:
        raise GridModeMismatch(f"{what} needs a {mode.value} grid, got {grid.duality_mode.value}")


def check_field(f, dim: int | None = None, mode=None, what: str = "field") -> SampledField:
    """Return ``f`` after checking its type, dimension and duality mode."""
    if not isinstance(f, SampledField):
        raise TypeError(f"{what} must be a SampledField, got {type(f).__name__}")
    if dim is not None and f.grid.dim != dim:
        raise ValueError(f"{what} must be {dim}-dimensional, got {f.grid.dim}")
    check_mode(f.grid, mode, what)
    if not np.all(np.isfinite(f.values)):
        raise ValueError(f"{what} has non-finite values")
    return f


def check_fields(X, grid: GridSpec | None = None, dim: int | None = None, mode=None) -> tuple[list[SampledField], bool]:
    """Normalize estimator input to a list of fields.

    ``X`` may be a single field, a sequence of fields, or a 2d array of shape
    ``(n_samples, grid.size)`` when ``grid`` is given.  The second return
    value tells whether the input was an array, so the output can mirror it.
    """
    if isinstance(X, SampledField):
        return [check_field(X, dim, mode)], False
    if isinstance(X, np.ndarray) or (isinstance(X, Sequence) and X and not isinstance(X[0], SampledField)):
        if grid is None:
            raise ValueError("array input needs the estimator's grid parameter")
        arr = np.asarray(X, dtype=complex)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.ndim != 2 or arr.shape[1] != grid.size:
            raise ValueError(f"expected an array of shape (n_samples, {grid.size}), got {arr.shape}")
        tag = SpaceTag.PHASE if grid.duality_mode is DualityMode.SYMPLECTIC else SpaceTag.BASE
        return [check_field(SampledField(grid, row, tag), dim, mode) for row in arr], True
    if isinstance(X, Sequence):
        if not X:
            raise ValueError("empty input")
        return [check_field(f, dim, mode) for f in X], False
    raise TypeError(f"cannot interpret {type(X).__name__} as fields")


def as_output(fields: list[SampledField], as_array: bool):
    """Stack flattened values when the input was an array, else return the list."""
    if as_array:
        return np.stack([f.values.ravel() for f in fields])
    return fields


def check_exponent(p, name: str = "p") -> Exponent:
    """Parse an exponent; raises :class:`~phasetwist.weights.InadmissibleExponent`."""
    return Exponent.of(p)
