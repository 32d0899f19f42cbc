"""scikit-learn style wrappers around the transforms, operators and norms.

Only the transformer protocol is honored: ``fit`` validates input and
records the grid, ``transform`` applies the map sample by sample.  Inputs
are a field, a list of fields, or an array of flattened samples together
with an explicit ``grid``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_output, check_exponent, check_field, check_fields
from .grid import DualityMode, GridModeMismatch, SampledField, gaussian, hermite, sample
from .norms import mixed_norm, modulation_norm, weighted_lp_norm, wiener_norm
from .spectral import fourier, partial_fourier, symplectic_fourier
from .timefreq import NATIVE, stft
from .weights import parse_weight
from .weyl import quantize_kernel, twisted_conv

__all__ = ["FourierTransformer", "STFTTransformer", "WeylOperator", "TwistedConvolver", "NormTransformer"]

_FOURIER_MODES = {"fourier": DualityMode.EUCLIDEAN, "partial2": DualityMode.EUCLIDEAN, "symplectic": DualityMode.SYMPLECTIC}


class _FieldTransformer(TransformerMixin, BaseEstimator):
    _mode = None

    def _input(self, X):
        return check_fields(X, getattr(self, "grid", None), mode=self._mode)

    def fit(self, X, y=None):
        fields, _ = self._input(X)
        self.grid_ = fields[0].grid
        self.n_features_in_ = self.grid_.size
        return self

    def _check_grid(self, fields):
        check_is_fitted(self, "grid_")
        for f in fields:
            if f.grid.dim != self.grid_.dim or not f.grid.same_lattice(self.grid_):
                raise ValueError("input grid differs from the grid seen in fit")


class FourierTransformer(_FieldTransformer):
    """Fourier (``kind="fourier"``), symplectic or partial Fourier transform.

    Parameters
    ----------
    kind : {"fourier", "symplectic", "partial2"}
    inverse : bool
        Ignored for the symplectic transform, which is an involution.
    grid : GridSpec, optional
        Needed only for array input.
    """

    def __init__(self, kind="fourier", inverse=False, grid=None):
        self.kind = kind
        self.inverse = inverse
        self.grid = grid

    @property
    def _mode(self):
        if self.kind not in _FOURIER_MODES:
            raise ValueError(f"kind must be one of {sorted(_FOURIER_MODES)}, got {self.kind!r}")
        return _FOURIER_MODES[self.kind]

    def transform(self, X):
        fields, arr = self._input(X)
        self._check_grid(fields)
        if self.kind == "fourier":
            out = [fourier(f, self.inverse) for f in fields]
        elif self.kind == "partial2":
            out = [partial_fourier(f, "second", self.inverse) for f in fields]
        else:
            out = [symplectic_fourier(f) for f in fields]
        return as_output(out, arr)

    def inverse_transform(self, X):
        fields, arr = self._input(X)
        self._check_grid(fields)
        if self.kind == "symplectic":
            return as_output([symplectic_fourier(f) for f in fields], arr)
        flip = not self.inverse
        if self.kind == "fourier":
            return as_output([fourier(f, flip) for f in fields], arr)
        return as_output([partial_fourier(f, "second", flip) for f in fields], arr)


def _make_window(win, grid) -> SampledField:
    if isinstance(win, SampledField):
        return check_field(win, grid.dim, grid.duality_mode, "window")
    if win in ("gauss", "gaussian"):
        return sample(gaussian((0.0,) * grid.dim), grid)
    if isinstance(win, str) and win.startswith("hermite:"):
        idx = [int(k) for k in win.split(":", 1)[1].split(",")]
        return sample(hermite(*(idx * grid.dim if len(idx) == 1 else idx)), grid)
    raise ValueError(f"window must be a field, 'gauss' or 'hermite:n', got {win!r}")


class STFTTransformer(_FieldTransformer):
    """Short-time Fourier transform with a fixed window.

    ``output_grid="phase"`` resamples onto the symplectic phase grid;
    ``"native"`` keeps the euclidean dual lattice.
    """

    _mode = DualityMode.EUCLIDEAN

    def __init__(self, window="gauss", output_grid="phase", grid=None):
        self.window = window
        self.output_grid = output_grid
        self.grid = grid

    def fit(self, X, y=None):
        super().fit(X)
        self.window_ = _make_window(self.window, self.grid_)
        if self.output_grid not in ("phase", "native"):
            raise ValueError(f"output_grid must be 'phase' or 'native', got {self.output_grid!r}")
        return self

    def transform(self, X):
        fields, arr = self._input(X)
        self._check_grid(fields)
        target = NATIVE if self.output_grid == "native" else None
        return as_output([stft(f, self.window_, target) for f in fields], arr)


class WeylOperator(_FieldTransformer):
    """``Op_t(symbol)`` as a transformer on base-space fields.

    ``fit`` builds the kernel matrix on the grid of the training input.
    """

    _mode = DualityMode.EUCLIDEAN

    def __init__(self, symbol=None, t=0.5, grid=None):
        self.symbol = symbol
        self.t = t
        self.grid = grid

    def fit(self, X, y=None):
        super().fit(X)
        sym = check_field(self.symbol, 2, None, "symbol")
        if sym.grid.duality_mode is not DualityMode.SYMPLECTIC:
            raise GridModeMismatch("symbol must live on a symplectic phase grid")
        self.kernel_ = quantize_kernel(sym, self.t, self.grid_)
        return self

    def transform(self, X):
        fields, arr = self._input(X)
        self._check_grid(fields)
        check_is_fitted(self, "kernel_")
        return as_output([self.kernel_.apply(f) for f in fields], arr)


class TwistedConvolver(_FieldTransformer):
    """Left twisted convolution ``b -> left *_sigma b`` by a fixed symbol."""

    _mode = DualityMode.SYMPLECTIC

    def __init__(self, left=None, method="direct", grid=None):
        self.left = left
        self.method = method
        self.grid = grid

    def fit(self, X, y=None):
        super().fit(X)
        check_field(self.left, self.grid_.dim, DualityMode.SYMPLECTIC, "left")
        return self

    def transform(self, X):
        fields, arr = self._input(X)
        self._check_grid(fields)
        return as_output([twisted_conv(self.left, b, self.method) for b in fields], arr)


class NormTransformer(_FieldTransformer):
    """Maps each field to one norm value; ``transform`` returns shape ``(n, 1)``.

    Parameters
    ----------
    space : {"Lp", "mixed", "M", "W"}
    p, q : exponent (number, fraction string or ``"inf"``)
    order : {1, 2}
        Integration order for ``space="mixed"``.
    weight : str
        Weight literal such as ``"x:1,xi:0"``.
    window : str or SampledField
        STFT window for the modulation and Wiener norms.
    """

    def __init__(self, space="Lp", p=2, q=None, order=1, weight="", window="gauss", grid=None):
        self.space = space
        self.p = p
        self.q = q
        self.order = order
        self.weight = weight
        self.window = window
        self.grid = grid

    def fit(self, X, y=None):
        check_exponent(self.p, "p")
        if self.space != "Lp":
            if self.q is None:
                raise ValueError(f"space {self.space!r} needs q")
            check_exponent(self.q, "q")
        if self.space not in ("Lp", "mixed", "M", "W"):
            raise ValueError(f"unknown space {self.space!r}")
        return super().fit(X)

    def _one(self, f: SampledField) -> float:
        if self.space == "Lp":
            return weighted_lp_norm(f, self.p, parse_weight(self.weight, f.grid.dim))
        if self.space == "mixed":
            return mixed_norm(f, self.p, self.q, self.order, parse_weight(self.weight, f.grid.dim))
        w = parse_weight(self.weight, 2 * f.grid.dim)
        g = _make_window(self.window, f.grid)
        fn = modulation_norm if self.space == "M" else wiener_norm
        return fn(f, self.p, self.q, w, g, NATIVE)

    def transform(self, X):
        fields, _ = self._input(X)
        self._check_grid(fields)
        return np.array([[self._one(f)] for f in fields])
