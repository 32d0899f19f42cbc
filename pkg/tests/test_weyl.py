import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasetwist.grid import GridModeMismatch, SampledField, SpaceTag, gaussian, hermite, make_grid, sample
from phasetwist.spectral import symplectic_fourier
from phasetwist.timefreq import wigner
from phasetwist.verify import rel_err
from phasetwist.weyl import apply_op, quantize_kernel, twisted_conv, weyl_product


@pytest.fixture(scope="module")
def symbols(phase):
    a = sample(gaussian((0.3, -0.2), (0.4, 0.1), width=0.9), phase)
    b = sample(gaussian((-0.5, 0.1), (0.0, -0.3), width=1.2, chirp=0.1), phase)
    return a, b


@pytest.fixture(scope="module")
def f(base):
    return sample(gaussian((0.6,), (-0.8,), width=1.1), base) + 0.5j * sample(hermite(2), base)


def test_twist_with_zero(symbols, phase):
    a, _ = symbols
    assert not np.any(twisted_conv(a, SampledField.zeros(phase)).values)


def test_wigner_idempotent(g, phase):
    W = wigner(g, g)
    assert rel_err(twisted_conv(W, W), W) <= 1e-6


def test_direct_matches_kernel(symbols):
    a, b = symbols
    assert rel_err(twisted_conv(a, b, "direct"), twisted_conv(a, b, "kernel")) <= 1e-5


@settings(max_examples=10)
@given(c1=st.complex_numbers(max_magnitude=3), c2=st.complex_numbers(max_magnitude=3))
def test_bilinear(symbols, phase, c1, c2):
    a, b = symbols
    e = sample(hermite(1, 0), phase)
    for op in (twisted_conv, weyl_product):
        lhs = op(a, c1 * b + c2 * e).values
        rhs = c1 * op(a, b).values + c2 * op(a, e).values
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (1 + np.max(np.abs(rhs)))


def test_fourier_intertwining(symbols):
    # F_sigma(a * b) = (F_sigma a) * b = a_flipped * F_sigma(b)
    from phasetwist.grid import flip

    a, b = symbols
    lhs = symplectic_fourier(twisted_conv(a, b))
    assert rel_err(lhs, twisted_conv(symplectic_fourier(a), b)) <= 1e-6
    assert rel_err(lhs, twisted_conv(flip(a), symplectic_fourier(b))) <= 1e-6


def test_multiplication_symbol(phase, base, f):
    # xi-independent symbol acts by multiplication; m tends to a constant so
    # it is smooth as a periodic function on the box
    def m(x):
        return 1 + 0.5 * np.exp(-(x**2)) * (1 + 0.3 * x)

    a = SampledField(phase, np.repeat(m(phase.axis())[:, None], phase.n_per_axis, axis=1), SpaceTag.PHASE)
    out = apply_op(a, 0.0, f)
    assert rel_err(out, m(base.axis()) * f.values) <= 1e-6


def test_zero_symbol_kernel(phase):
    assert not np.any(quantize_kernel(SampledField.zeros(phase), 0.5).entries)


def test_t_out_of_range(symbols):
    with pytest.raises(ValueError):
        quantize_kernel(symbols[0], 1.5)


def test_rank_one(g, f):
    a = wigner(g, g) * math.sqrt(2 * math.pi)
    assert rel_err(apply_op(a, 0.5, f), g * f.inner(g)) <= 1e-5


def test_unit_symbol_is_identity(phase, f):
    one = SampledField(phase, np.ones(phase.shape), SpaceTag.PHASE)
    for t in (0.0, 0.5, 1.0):
        assert rel_err(apply_op(one, t, f), f) <= 1e-6


def test_kernel_matches_quadrature(symbols, f):
    a, _ = symbols
    for t in (0.0, 0.5, 1.0):
        assert rel_err(apply_op(a, t, f, "kernel"), apply_op(a, t, f, "quadrature")) <= 1e-6


def test_apply_linear(symbols, base, f):
    a, _ = symbols
    h2 = sample(hermite(3), base)
    lhs = apply_op(a, 0.5, 2 * f - 1j * h2).values
    rhs = 2 * apply_op(a, 0.5, f).values - 1j * apply_op(a, 0.5, h2).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(rhs))


def test_apply_rejects_symplectic_field(symbols, phase):
    with pytest.raises(GridModeMismatch):
        apply_op(symbols[0], 0.5, SampledField.zeros(make_grid(1, 64, "symplectic"), SpaceTag.BASE))


def test_weyl_unit(phase, symbols):
    one = SampledField(phase, np.ones(phase.shape), SpaceTag.PHASE)
    _, b = symbols
    assert rel_err(weyl_product(one, b), b) <= 1e-6


def test_weyl_methods_agree(symbols):
    a, b = symbols
    assert rel_err(weyl_product(a, b, "twist"), weyl_product(a, b, "kernel")) <= 1e-5


def test_weyl_composition(g, f):
    W = wigner(g, g)
    assert rel_err(apply_op(weyl_product(W, W), 0.5, f), apply_op(W, 0.5, apply_op(W, 0.5, f))) <= 1e-5


def test_symbol_grid_checks(phase, base):
    with pytest.raises(GridModeMismatch):
        twisted_conv(SampledField.zeros(make_grid(2, 64, "euclidean")), SampledField.zeros(make_grid(2, 64, "euclidean")))
    with pytest.raises(ValueError):
        twisted_conv(SampledField.zeros(phase), SampledField.zeros(make_grid(2, 32, "symplectic")))
