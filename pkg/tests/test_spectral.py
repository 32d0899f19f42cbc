import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phasetwist.grid import GridModeMismatch, SampledField, SpaceTag, gaussian, make_grid, sample
from phasetwist.spectral import fourier, partial_fourier, resample, symplectic_fourier

from conftest import rel


def _random_field(grid, seed, tag=SpaceTag.BASE):
    r = np.random.default_rng(seed)
    vals = r.normal(size=grid.shape) + 1j * r.normal(size=grid.shape)
    return SampledField(grid, vals, tag)


def test_gaussian_fixed_point(base, g):
    assert np.max(np.abs(fourier(g).values - g.values)) <= 1e-8


def test_inversion(base):
    f = _random_field(base, 0)
    assert rel(fourier(fourier(f), inverse=True), f) <= 1e-12


def test_real_even_stays_real_even(base):
    f = sample(gaussian((0.0,), width=1.7), base)
    F = fourier(f)
    assert np.max(np.abs(F.values.imag)) <= 1e-12
    assert np.allclose(F.values[1:], F.values[1:][::-1], atol=1e-12)


@given(seed=st.integers(0, 2**16))
def test_parseval(base, seed):
    f = _random_field(base, seed)
    assert fourier(f).l2_norm() == pytest.approx(f.l2_norm(), rel=1e-10)


@given(seed=st.integers(0, 2**16), a=st.complex_numbers(max_magnitude=5), b=st.complex_numbers(max_magnitude=5))
def test_linearity(base, seed, a, b):
    f, h = _random_field(base, seed), _random_field(base, seed + 1)
    lhs = fourier(a * f + b * h).values
    rhs = a * fourier(f).values + b * fourier(h).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (1 + np.max(np.abs(rhs)))


def test_fourier_rejects_symplectic(phase):
    with pytest.raises(GridModeMismatch):
        fourier(SampledField.zeros(phase))


def test_partial_separable():
    E = make_grid(2, 64, "euclidean")
    E1 = E.with_dim(1)
    u = sample(gaussian((0.5,), (1.0,)), E1).values
    w = sample(gaussian((-0.3,), width=0.8), E1)
    F = SampledField(E, np.outer(u, w.values))
    out = partial_fourier(F, "second")
    assert np.max(np.abs(out.values - np.outer(u, fourier(w).values))) <= 1e-12


def test_partial_inversion_and_first_block():
    E = make_grid(2, 64, "euclidean")
    F = _random_field(E, 3)
    assert rel(partial_fourier(partial_fourier(F, "second"), "second", inverse=True), F) <= 1e-12
    gg = sample(gaussian((0.0, 0.0)), E)
    assert np.max(np.abs(partial_fourier(gg, "first").values - gg.values)) <= 1e-8


def test_partial_rejects_odd(base):
    with pytest.raises(ValueError):
        partial_fourier(SampledField.zeros(base))


def test_symplectic_gaussian_fixed_point(phase):
    X, XI = phase.mesh()
    A = SampledField(phase, np.exp(-(X**2 + XI**2)), SpaceTag.PHASE)
    assert np.max(np.abs(symplectic_fourier(A).values - A.values)) <= 1e-8


@given(seed=st.integers(0, 2**16))
def test_symplectic_involution(phase, seed):
    a = _random_field(phase, seed, SpaceTag.PHASE)
    assert rel(symplectic_fourier(symplectic_fourier(a)), a) <= 1e-10


def test_symplectic_zero_and_mode(phase, base):
    assert not np.any(symplectic_fourier(SampledField.zeros(phase)).values)
    with pytest.raises(GridModeMismatch):
        symplectic_fourier(SampledField.zeros(make_grid(2, 64, "euclidean")))


def test_resample_identity_and_constant(base):
    f = _random_field(base, 1)
    assert np.array_equal(resample(f, base).values, f.values)
    one = SampledField(base, np.ones(base.shape))
    fine = make_grid(1, 512, "symplectic")
    out = resample(one, fine)
    inside = np.abs(fine.axis()) < base.half_width - base.spacing
    assert np.allclose(out.values[inside], 1.0, atol=1e-12)


def test_resample_gaussian_refinement():
    src = make_grid(1, 64, "euclidean")
    dst = make_grid(1, 128, "symplectic")
    assert dst.half_width == pytest.approx(src.half_width, rel=1e-12)
    out = resample(sample(gaussian((0.2,)), src), dst)
    exact = sample(gaussian((0.2,)), dst, SpaceTag.BASE)
    assert np.max(np.abs(out.values - exact.values)) <= 1e-8


def test_resample_dim_mismatch(base, phase):
    with pytest.raises(ValueError):
        resample(SampledField.zeros(base), phase)


def test_threads_env_does_not_change_results(base, monkeypatch):
    f = _random_field(base, 9)
    ref = fourier(f).values
    monkeypatch.setenv("PHASETWIST_THREADS", "2")
    assert np.array_equal(fourier(f).values, ref)
    assert math.isfinite(float(np.sum(np.abs(ref))))
