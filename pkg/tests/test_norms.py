
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phasetwist.grid import SampledField, SpaceTag, gaussian, hermite, make_grid, sample, translate_modulate
from phasetwist.norms import mixed_norm, mixed_norm_array, modulation_norm, weighted_lp_norm, wiener_norm
from phasetwist.timefreq import NATIVE
from phasetwist.verify.corpus import base_corpus
from phasetwist.verify.oracles import naive_mixed_norm
from phasetwist.weights import Exponent, parse_weight, peetre

exponents = st.sampled_from(["1", "6/5", "3/2", "2", "3", "4", "inf"])


@pytest.fixture(scope="module")
def corpus(base):
    return [f for _, f in base_corpus(7, base, 12)]


def _phase_field(grid, seed):
    r = np.random.default_rng(seed)
    return SampledField(grid, r.normal(size=grid.shape) + 1j * r.normal(size=grid.shape), SpaceTag.PHASE)


def test_constant_field(phase):
    one = SampledField(phase, np.ones(phase.shape), SpaceTag.PHASE)
    assert mixed_norm(one, 1, 1) == pytest.approx((2 * phase.half_width) ** 2, rel=1e-12)


def test_separable(phase):
    ax = phase.axis()
    u, w = np.exp(-ax**2) * (1 + ax), np.exp(-0.5 * ax**2)
    F = SampledField(phase, np.outer(u, w), SpaceTag.PHASE)
    h = phase.spacing
    for p, q in ((1, 2), (3, 1.5), ("inf", 2), (2, "inf")):
        def lp(v, r):
            r = Exponent.of(r)
            return np.max(np.abs(v)) if r.is_inf else (np.sum(np.abs(v) ** r.p) * h) ** (1 / r.p)
        assert mixed_norm(F, p, q, 1) == pytest.approx(lp(u, p) * lp(w, q), rel=1e-10)


@given(seed=st.integers(0, 1000), p=exponents)
def test_orders_agree_when_p_equals_q(phase, seed, p):
    F = _phase_field(phase, seed)
    assert mixed_norm(F, p, p, 1) == pytest.approx(mixed_norm(F, p, p, 2), rel=1e-12)


@given(seed=st.integers(0, 1000), p=exponents, q=exponents, c=st.complex_numbers(min_magnitude=0.1, max_magnitude=10))
def test_norm_axioms(phase, seed, p, q, c):
    F, G = _phase_field(phase, seed), _phase_field(phase, seed + 1)
    w = peetre(1.0, 2)
    nF, nG = mixed_norm(F, p, q, 1, w), mixed_norm(G, p, q, 1, w)
    assert mixed_norm(F + G, p, q, 1, w) <= (nF + nG) * (1 + 1e-10)
    assert mixed_norm(c * F, p, q, 1, w) == pytest.approx(abs(c) * nF, rel=1e-10)


@given(seed=st.integers(0, 1000), s=st.floats(0, 2), ds=st.floats(0, 1))
def test_weight_monotonicity(phase, seed, s, ds):
    F = _phase_field(phase, seed)
    assert mixed_norm(F, 3, 2, 2, peetre(s, 2)) <= mixed_norm(F, 3, 2, 2, peetre(s + ds, 2)) * (1 + 1e-12)


def test_naive_oracle_agreement():
    grid = make_grid(2, 16, "symplectic")
    r = np.random.default_rng(11)
    choices = ["1", "4/3", "2", "3", "inf"]
    worst = 0.0
    for k in range(100):
        F = _phase_field(grid, 100 + k)
        p, q = choices[r.integers(5)], choices[r.integers(5)]
        order = 1 + k % 2
        w = parse_weight(f"x:{r.uniform(0, 2):.3f},xi:{r.uniform(-1, 1):.3f}", 2).on_grid(grid)
        fast = mixed_norm(F, p, q, order, w)
        slow = naive_mixed_norm(F.values, grid.spacing, Exponent.of(p).p, Exponent.of(q).p, order, w)
        worst = max(worst, abs(fast - slow) / slow)
    assert worst <= 1e-12


def test_mixed_norm_array_rejects_odd():
    with pytest.raises(ValueError):
        mixed_norm_array(np.ones(4), 1.0, 2, 2)
    with pytest.raises(ValueError):
        mixed_norm_array(np.ones((4, 4)), 1.0, 2, 2, order=3)


def test_modulation_norm_examples(base, g):
    assert modulation_norm(SampledField.zeros(base), 2, 2, window=g, grid=NATIVE) == 0.0
    assert modulation_norm(g, 2, 2, peetre(0.0, 2), g, NATIVE) == pytest.approx(1.0, abs=1e-6)
    f = sample(gaussian((0.5,), (1.0,), width=0.7), base)
    c = 2.5 - 1.5j
    assert modulation_norm(c * f, 1, 3, peetre(1.0, 2), g, NATIVE) == pytest.approx(
        abs(c) * modulation_norm(f, 1, 3, peetre(1.0, 2), g, NATIVE), rel=1e-12
    )


def test_wiener_equals_modulation_when_p_equals_q(base, g):
    f = sample(hermite(2), base)
    for p in ("1", "2", "inf"):
        assert wiener_norm(f, p, p, window=g, grid=NATIVE) == pytest.approx(
            modulation_norm(f, p, p, window=g, grid=NATIVE), rel=1e-12
        )
    assert wiener_norm(SampledField.zeros(base), 1, 2, window=g) == 0.0


def test_wiener_inside_modulation_ratio_bounded(corpus, g):
    # p <= q: ||f||_M <= C ||f||_W, one constant across the corpus
    ratios = [modulation_norm(f, 1, 2, window=g, grid=NATIVE) / wiener_norm(f, 1, 2, window=g, grid=NATIVE) for f in corpus]
    assert np.all(np.isfinite(ratios))
    assert max(ratios) <= 50 * np.median(ratios)
    assert max(ratios) <= 1 + 1e-9


def test_weighted_lp_examples(base, phase):
    spike = SampledField(phase, np.zeros(phase.shape), SpaceTag.PHASE).with_values(
        np.eye(1, phase.size, 37).reshape(phase.shape)
    )
    assert weighted_lp_norm(spike, 1) == pytest.approx(phase.cell_volume, rel=1e-14)
    f = _phase_field(phase, 5)
    assert weighted_lp_norm(f, 2) == pytest.approx(f.l2_norm(), rel=1e-12)
    vals = [weighted_lp_norm(f, 3, peetre(s, 2)) for s in (0.0, 0.5, 1.0, 2.0)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_translation_modulation_bound(corpus, base, g):
    # ||T_x0 M_xi0 f||_M(w) <= C v(x0, xi0) ||f||_M(w) with v = <.>^s
    s = 1.0
    w = peetre(s, 2)
    ratios = []
    for f in corpus[:6]:
        ref = modulation_norm(f, 2, 1, w, g, NATIVE)
        for k, xi0 in ((8, 0.0), (-12, 1.5), (20, -2.0)):
            x0 = k * base.spacing
            moved = translate_modulate(f, [x0], [xi0])
            ratios.append(modulation_norm(moved, 2, 1, w, g, NATIVE) / (w([x0, xi0]) * ref))
    assert np.all(np.isfinite(ratios))
    assert max(ratios) <= 2 ** (s / 2) * (1 + 1e-6)
