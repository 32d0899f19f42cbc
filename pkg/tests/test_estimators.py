import numpy as np
import pytest
from sklearn.base import clone

from phasetwist.estimators import FourierTransformer, NormTransformer, STFTTransformer, TwistedConvolver, WeylOperator
from phasetwist.grid import GridModeMismatch, gaussian, hermite, sample
from phasetwist.norms import modulation_norm
from phasetwist.spectral import fourier
from phasetwist.timefreq import NATIVE, stft
from phasetwist.weights import InadmissibleExponent
from phasetwist.weyl import apply_op, twisted_conv


@pytest.fixture(scope="module")
def fields(base):
    return [sample(gaussian((0.2 * k,), (0.1 * k,)), base) for k in range(3)] + [sample(hermite(2), base)]


def test_get_params_and_clone():
    est = NormTransformer(space="M", p="4/3", q=4, weight="x:1")
    params = est.get_params()
    assert params["p"] == "4/3" and params["weight"] == "x:1"
    assert clone(est).get_params() == params


def test_fourier_transformer(fields, base):
    est = FourierTransformer().fit(fields)
    out = est.transform(fields)
    assert all(np.array_equal(o.values, fourier(f).values) for o, f in zip(out, fields))
    back = est.inverse_transform(out)
    assert max(np.max(np.abs(b.values - f.values)) for b, f in zip(back, fields)) <= 1e-12


def test_array_input(fields, base):
    X = np.stack([f.values for f in fields])
    est = FourierTransformer(grid=base)
    Y = est.fit_transform(X)
    assert Y.shape == X.shape
    assert np.array_equal(Y[1], fourier(fields[1]).values)
    with pytest.raises(ValueError):
        FourierTransformer().fit(X)
    with pytest.raises(ValueError):
        est.transform(X[:, :10])


def test_mode_checks(fields, phase):
    with pytest.raises(GridModeMismatch):
        FourierTransformer(kind="symplectic").fit(fields)
    with pytest.raises(ValueError):
        FourierTransformer(kind="nope").fit(fields)


def test_stft_transformer(fields, g):
    est = STFTTransformer(output_grid="native").fit(fields)
    out = est.transform(fields[:2])
    assert np.array_equal(out[1].values, stft(fields[1], g, NATIVE).values)


def test_weyl_operator(fields, phase):
    a = sample(gaussian((0.3, -0.2), (0.4, 0.1)), phase)
    est = WeylOperator(symbol=a, t=0.5).fit(fields)
    out = est.transform(fields[3])
    assert np.allclose(out[0].values, apply_op(a, 0.5, fields[3]).values, rtol=0, atol=1e-13)


def test_twisted_convolver(phase):
    a = sample(gaussian((0.3, -0.2), (0.4, 0.1)), phase)
    b = sample(gaussian((0.0, 0.5)), phase)
    out = TwistedConvolver(left=a).fit_transform([b])
    assert np.array_equal(out[0].values, twisted_conv(a, b).values)


def test_norm_transformer(fields, g):
    est = NormTransformer(space="M", p=2, q=1, weight="all:1").fit(fields)
    Z = est.transform(fields)
    assert Z.shape == (len(fields), 1)
    from phasetwist.weights import parse_weight

    assert Z[0, 0] == modulation_norm(fields[0], 2, 1, parse_weight("all:1", 2), g, NATIVE)
    with pytest.raises(InadmissibleExponent):
        NormTransformer(p="1/2").fit(fields)
    with pytest.raises(ValueError):
        NormTransformer(space="M", p=2).fit(fields)


def test_unfitted_transform_raises(fields):
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        FourierTransformer().transform(fields)
