"""Deterministic test-function corpora and stress orbits."""
from __future__ import annotations

import numpy as np

from ..grid import GridSpec, SampledField, gaussian, hermite, linear_combo, sample, translate_modulate

__all__ = ["rng_for", "base_corpus", "symbol_corpus", "base_orbit", "symbol_orbit"]

# stream ids keep independent draws stable when other streams change
STREAMS = {
    "base_corpus": 1,
    "symbol_corpus": 2,
    "orbit_base_a": 11,
    "orbit_base_b": 12,
    "orbit_sym_a": 21,
    "orbit_sym_b": 22,
    "points": 31,
}


def rng_for(seed: int, stream: str) -> np.random.Generator:
    return np.random.default_rng([int(seed), STREAMS[stream]])


def _fmt(v) -> str:
    return ",".join(f"{x:.4g}" for x in np.atleast_1d(v))


def _random_gauss(rng, dim: int, shift: float, mod: float, dil: tuple[float, float], chirp: float = 0.0):
    c = rng.uniform(-shift, shift, dim)
    m = rng.uniform(-mod, mod, dim)
    w = float(np.exp(rng.uniform(np.log(dil[0]), np.log(dil[1]))))
    ch = float(rng.uniform(-chirp, chirp)) if chirp else 0.0
    desc = f"gauss(c=[{_fmt(c)}],m=[{_fmt(m)}],w={w:.4g},ch={ch:.3g})"
    return gaussian(c, m, w, ch), desc


def _element(rng, grid: GridSpec, k: int, shift: float, mod: float, dil, chirp: float):
    """One corpus element; ``k`` cycles through Gaussian, Hermite and combos."""
    dim = grid.dim
    kind = k % 3
    if kind == 0:
        gen, desc = _random_gauss(rng, dim, shift, mod, dil, chirp)
        return desc, sample(gen, grid)
    if kind == 1:
        idx = tuple(int(i) for i in rng.integers(0, 4 if dim == 1 else 3, size=dim))
        steps = rng.integers(-int(shift / grid.spacing), int(shift / grid.spacing) + 1, size=dim)
        m = rng.uniform(-mod, mod, dim)
        f = translate_modulate(sample(hermite(*idx), grid), steps * grid.spacing, m)
        return f"hermite({_fmt(idx)})@[{_fmt(steps * grid.spacing)}]x[{_fmt(m)}]", f
    g1, d1 = _random_gauss(rng, dim, shift, mod, dil, chirp)
    g2, d2 = _random_gauss(rng, dim, shift, mod, dil, chirp)
    c = complex(*rng.uniform(-1, 1, 2))
    return f"combo({d1}+({c.real:.3g}{c.imag:+.3g}j){d2})", sample(linear_combo([(1.0, g1), (c, g2)]), grid)


def base_corpus(seed: int, grid: GridSpec, size: int) -> list[tuple[str, SampledField]]:
    """Gaussians (with chirps), shifted Hermite functions and two-term combos."""
    rng = rng_for(seed, "base_corpus")
    return [_element(rng, grid, k, 1.0, 1.0, (0.8, 1.25), 0.3) for k in range(size)]


def symbol_corpus(seed: int, grid: GridSpec, size: int) -> list[tuple[str, SampledField]]:
    rng = rng_for(seed, "symbol_corpus")
    return [_element(rng, grid, k, 1.0, 1.0, (0.8, 1.25), 0.2) for k in range(size)]


def _orbit(seed, stream, grid, size, orbit):
    rng = rng_for(seed, stream)
    shift = float(orbit.get("shift", 1.0))
    mod = float(orbit.get("modulation", 1.0))
    dil = tuple(orbit.get("dilation", (0.8, 1.25)))
    return [_element(rng, grid, k, shift, mod, dil, 0.2) for k in range(size)]


def base_orbit(seed: int, grid: GridSpec, size: int, orbit: dict, which: str = "a"):
    """Translation-modulation-dilation stress orbit of functions on ``R``."""
    return _orbit(seed, f"orbit_base_{which}", grid, size, orbit)


def symbol_orbit(seed: int, grid: GridSpec, size: int, orbit: dict, which: str = "a"):
    """Stress orbit of symbols on the phase grid."""
    return _orbit(seed, f"orbit_sym_{which}", grid, size, orbit)
