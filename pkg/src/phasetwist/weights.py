"""Peetre-type weights, Lebesgue exponents and the admissibility predicates.

Exponents are kept as reciprocals ``r = 1/p`` so that ``p = inf`` is
``r = 0`` and every condition below is an affine comparison.  Rational input
is stored as :class:`fractions.Fraction` and compared exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real

import numpy as np
from scipy.stats import qmc

__all__ = [
    "Exponent",
    "Weight",
    "peetre",
    "parse_weight",
    "eval_weight",
    "check_moderate",
    "conjugate",
    "check_weyl_exponents",
    "check_twist_exponents",
    "check_leb_exponents",
    "check_mixed_leb_exponents",
    "check_weight_domination",
    "InadmissibleExponent",
]


class InadmissibleExponent(ValueError):
    """Raised for exponents outside ``[1, inf]`` or unparsable exponent text."""


_INF_WORDS = {"inf", "infinity", "∞", "oo"}


@dataclass(frozen=True)
class Exponent:
    """Lebesgue exponent ``p`` in ``[1, inf]`` stored as ``r = 1/p``."""

    r: Fraction | float

    def __post_init__(self):
        r = self.r
        if isinstance(r, float) and not math.isfinite(r):
            raise InadmissibleExponent(f"reciprocal must be finite, got {r}")
        if not (0 <= r <= 1):
            raise InadmissibleExponent(f"exponent must lie in [1, inf]; reciprocal {r} is outside [0, 1]")

    @classmethod
    def of(cls, p) -> "Exponent":
        """Build from ``p`` given as number, Fraction, ``Exponent`` or text."""
        if isinstance(p, Exponent):
            return p
        if isinstance(p, str):
            text = p.strip().lower()
            if text in _INF_WORDS:
                return cls(Fraction(0))
            try:
                p = Fraction(text)
            except (ValueError, ZeroDivisionError) as exc:
                raise InadmissibleExponent(f"cannot parse exponent {p!r}") from exc
        if isinstance(p, bool) or not isinstance(p, Real):
            raise InadmissibleExponent(f"cannot interpret {p!r} as an exponent")
        if isinstance(p, float):
            if math.isinf(p) and p > 0:
                return cls(Fraction(0))
            if not math.isfinite(p):
                raise InadmissibleExponent(f"invalid exponent {p}")
            # repr gives the shortest decimal, so 1.2 becomes 6/5
            p = Fraction(repr(p))
        p = Fraction(p)
        if p < 1:
            raise InadmissibleExponent(f"exponent must be >= 1, got {p}")
        return cls(1 / p)

    @property
    def p(self) -> float:
        return math.inf if self.r == 0 else 1.0 / float(self.r)

    @property
    def is_inf(self) -> bool:
        return self.r == 0

    def conjugate(self) -> "Exponent":
        return Exponent(1 - self.r)

    def __float__(self) -> float:
        return self.p

    def __str__(self) -> str:
        if self.is_inf:
            return "inf"
        if isinstance(self.r, Fraction):
            p = 1 / self.r
            return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"
        return repr(self.p)


def conjugate(p) -> Exponent:
    """Conjugate exponent ``p'`` with ``1/p + 1/p' = 1``."""
    return Exponent.of(p).conjugate()


def _rs(*ps) -> list:
    return [Exponent.of(p).r for p in ps]


# ----------------------------------------------------------------------------
# weights


_BLOCKS = {
    1: {"x": (0,)},
    2: {"x": (0,), "xi": (1,)},
    4: {"x": (0,), "xi": (1,), "eta": (2,), "y": (3,), "X": (0, 1), "Y": (2, 3)},
}


def _block_axes(name: str, dim: int) -> tuple[int, ...]:
    if name == "all":
        return tuple(range(dim))
    if dim % 2 == 0 and dim > 4:
        half = dim // 2
        named = {"x": tuple(range(half)), "xi": tuple(range(half, dim))}
    else:
        named = _BLOCKS.get(dim, {})
    if name in named:
        return named[name]
    raise ValueError(f"unknown weight block {name!r} for dimension {dim}")


@dataclass(frozen=True)
class Weight:
    """Product of Peetre factors ``prod <X_block>^s``.

    Parameters
    ----------
    dim : int
        Dimension of the argument ``X``.
    factors : tuple of (axes, s)
        Axis subsets and their exponents.
    companion : Weight, optional
        Submultiplicative weight ``v`` for which this weight is moderate.
    """

    dim: int
    factors: tuple[tuple[tuple[int, ...], float], ...] = ()
    companion: "Weight | None" = field(default=None, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("weight dimension must be positive")
        clean = []
        for axes, s in self.factors:
            axes = tuple(int(a) for a in axes)
            if not axes or any(a < 0 or a >= self.dim for a in axes):
                raise ValueError(f"factor axes {axes} out of range for dim {self.dim}")
            if not math.isfinite(float(s)):
                raise ValueError("weight exponent must be finite")
            clean.append((axes, float(s)))
        object.__setattr__(self, "factors", tuple(clean))
        if self.companion is not None and self.companion.dim != self.dim:
            raise ValueError("companion weight has a different dimension")

    @property
    def is_trivial(self) -> bool:
        return all(s == 0 for _, s in self.factors)

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.dim:
            raise ValueError(f"weight of dim {self.dim} evaluated at points of dim {X.shape[-1]}")
        out = np.ones(X.shape[:-1])
        for axes, s in self.factors:
            if s:
                sq = np.sum(X[..., list(axes)] ** 2, axis=-1)
                out = out * (1.0 + sq) ** (s / 2)
        return out

    def on_grid(self, grid) -> np.ndarray:
        """Weight values on the nodes of ``grid`` (shape ``grid.shape``)."""
        if grid.dim != self.dim:
            raise ValueError(f"weight of dim {self.dim} on a grid of dim {grid.dim}")
        if self.is_trivial:
            return np.ones(grid.shape)
        # separable per factor: build from 1D squares by broadcasting
        ax = grid.axis() ** 2
        out = np.ones(grid.shape)
        for axes, s in self.factors:
            if not s:
                continue
            sq = np.zeros([grid.n_per_axis if a in axes else 1 for a in range(self.dim)])
            for a in axes:
                shape = [1] * self.dim
                shape[a] = grid.n_per_axis
                sq = sq + ax.reshape(shape)
            out = out * (1.0 + sq) ** (s / 2)
        return out

    def literal(self) -> str:
        names = {v: k for k, v in _BLOCKS.get(self.dim, {}).items()}
        parts = []
        for axes, s in self.factors:
            name = "all" if axes == tuple(range(self.dim)) else names.get(axes, "[" + ",".join(map(str, axes)) + "]")
            parts.append(f"{name}:{s:g}")
        return ",".join(parts) if parts else "all:0"


def peetre(s: float, dim: int, block: str = "all") -> Weight:
    """``<X_block>^s`` with companion ``<X>^{|s|}`` (Peetre's inequality)."""
    axes = _block_axes(block, dim)
    comp = Weight(dim, ((tuple(range(dim)), abs(s)),))
    return Weight(dim, ((axes, s),), companion=comp)


def parse_weight(text: str, dim: int) -> Weight:
    """Parse ``"x:1.5,xi:0"`` or ``"all:2"`` into a :class:`Weight`.

    The companion is ``<X>^S`` with ``S`` the sum of the absolute exponents,
    which dominates every factor by Peetre's inequality.
    """
    text = (text or "").strip()
    if not text:
        return Weight(dim)
    factors = []
    for part in text.split(","):
        if ":" not in part:
            raise ValueError(f"weight factor {part!r} must look like block:s")
        name, _, s = part.partition(":")
        try:
            sval = float(s)
        except ValueError as exc:
            raise ValueError(f"weight exponent {s!r} is not a number") from exc
        factors.append((_block_axes(name.strip(), dim), sval))
    total = sum(abs(s) for _, s in factors)
    return Weight(dim, tuple(factors), companion=Weight(dim, ((tuple(range(dim)), total),)))


def eval_weight(w: Weight, X) -> float | np.ndarray:
    """Evaluate ``w`` at one point (returns float) or at rows of points."""
    X = np.asarray(X, dtype=float)
    out = w(X)
    return float(out) if out.ndim == 0 else out


def _sobol(n: int, dim: int, box: float, seed: int) -> np.ndarray:
    """``n`` scrambled Sobol points in ``[-box, box]^dim``; the second half is
    shrunk by 10 so that near-origin extremal configurations are also hit."""
    m = max(int(math.ceil(math.log2(max(n, 2)))), 1)
    pts = (2.0 * qmc.Sobol(dim, scramble=True, seed=seed).random_base2(m)[:n] - 1.0) * box
    pts[n // 2 :] /= 10.0
    return pts


def check_moderate(w: Weight, v: Weight, sample_count: int = 4096, box: float = 10.0, seed: int = 0) -> float:
    """Empirical ``sup w(x+y) / (w(x) v(y))`` over quasi-random pairs.

    The pair ``y = 0`` is always included.  The value is a lower estimate of
    the best constant, not a proof.
    """
    if w.dim != v.dim:
        raise ValueError("weights must share a dimension")
    pts = _sobol(sample_count, 2 * w.dim, box, seed)
    x, y = pts[:, : w.dim], pts[:, w.dim :]
    y = np.vstack([y, np.zeros((1, w.dim))])
    x = np.vstack([x, x[:1]])
    ratio = w(x + y) / (w(x) * v(y))
    return float(np.max(ratio))


# ----------------------------------------------------------------------------
# exponent predicates


def _chain(lo, mid, hi) -> bool:
    return lo <= mid <= hi


def check_weyl_exponents(p0, p1, p2, q0, q1, q2) -> bool:
    """Admissibility for the Weyl product on modulation spaces.

    With ``P = 1/p1 + 1/p2 - 1/p0`` and ``Q = 1/q1 + 1/q2 - 1/q0``: ``P = 1 - Q``
    and ``0 <= P <= 1/p_j, 1/q_j <= Q`` for ``j = 0, 1, 2``.
    """
    r0, r1, r2, s0, s1, s2 = _rs(p0, p1, p2, q0, q1, q2)
    P = r1 + r2 - r0
    Q = s1 + s2 - s0
    if P != 1 - Q:
        return False
    return all(_chain(0, P, r) and _chain(P, r, Q) and _chain(0, P, s) and _chain(P, s, Q) for r, s in zip((r0, r1, r2), (s0, s1, s2)))


def check_twist_exponents(p0, p1, p2, q0, q1, q2) -> bool:
    """Admissibility for twisted convolution on Wiener amalgam spaces.

    Same as :func:`check_weyl_exponents` with the roles of ``P`` and ``Q``
    in the chain exchanged: ``0 <= Q <= 1/p_j, 1/q_j <= P``.
    """
    r0, r1, r2, s0, s1, s2 = _rs(p0, p1, p2, q0, q1, q2)
    P = r1 + r2 - r0
    Q = s1 + s2 - s0
    if P != 1 - Q:
        return False
    return all(_chain(0, Q, r) and _chain(Q, r, P) and _chain(0, Q, s) and _chain(Q, s, P) for r, s in zip((r0, r1, r2), (s0, s1, s2)))


def _leb_chain(r, r1, r2) -> bool:
    S = r1 + r2 - r
    return max(r, 1 - r) <= S <= 1 and r1 >= r and r2 >= r


def check_leb_exponents(p, p1, p2) -> bool:
    """``max(1/p, 1/p') <= 1/p1 + 1/p2 - 1/p <= 1`` and ``p1, p2 <= p``."""
    r, r1, r2 = _rs(p, p1, p2)
    return _leb_chain(r, r1, r2)


def check_mixed_leb_exponents(p, q, p1, q1, p2, q2) -> bool:
    """Mixed-norm version: both sums dominate ``1/p, 1/p', 1/q, 1/q'``."""
    r, s, r1, s1, r2, s2 = _rs(p, q, p1, q1, p2, q2)
    lower = max(r, 1 - r, s, 1 - s)
    P = r1 + r2 - r
    Q = s1 + s2 - s
    return (
        lower <= P <= 1
        and lower <= Q <= 1
        and min(r1, r2) >= r
        and min(s1, s2) >= s
    )


# ----------------------------------------------------------------------------
# weight domination


DOMINATION_KINDS = ("vikt1", "vikt2", "additive", "omegascond")


def _domination_ratio(kind: str, w0: Weight, w1: Weight, w2: Weight, pts: np.ndarray) -> np.ndarray:
    if kind == "additive":
        D = w0.dim
        a, b = pts[:, :D], pts[:, D:]
        return w0(a + b) / (w1(a) * w2(b))
    if kind in ("vikt1", "vikt2"):
        D = w0.dim // 2
        X, Y, Z = pts[:, :D], pts[:, D : 2 * D], pts[:, 2 * D :]
        first = np.hstack([X - Y + Z, Z])
        second = np.hstack([X + Z, Y - Z]) if kind == "vikt1" else np.hstack([Y - Z, X + Z])
        return w0(np.hstack([X, Y])) / (w1(first) * w2(second))
    if kind == "omegascond":
        # w2(x, xi + eta) / w1(x + y, xi) <= C w(x, xi, eta, y); w0 is the 4d weight
        d = w1.dim // 2
        x, xi, eta, y = (pts[:, k * d : (k + 1) * d] for k in range(4))
        return w2(np.hstack([x, xi + eta])) / (w1(np.hstack([x + y, xi])) * w0(pts))
    raise ValueError(f"unknown domination kind {kind!r}")


def _sample_dim(kind: str, w0: Weight, w1: Weight, w2: Weight) -> int:
    if kind == "additive":
        if not (w0.dim == w1.dim == w2.dim):
            raise ValueError("additive domination needs weights of one dimension")
        return 2 * w0.dim
    if kind in ("vikt1", "vikt2"):
        if not (w0.dim == w1.dim == w2.dim) or w0.dim % 2:
            raise ValueError(f"{kind} needs three weights of one even dimension")
        return 3 * (w0.dim // 2)
    if kind == "omegascond":
        if w1.dim != w2.dim or w0.dim != 2 * w1.dim:
            raise ValueError("omegascond needs w0 on R^{4d} and w1, w2 on R^{2d}")
        return w0.dim
    raise ValueError(f"unknown domination kind {kind!r}")


def check_weight_domination(kind: str, w0: Weight, w1: Weight, w2: Weight, samples: int = 4096,
                            box: float = 10.0, seed: int = 0) -> float:
    """Empirical best constant for a weight domination condition.

    ``additive``: ``w0(X1 + X2) <= C w1(X1) w2(X2)``.
    ``vikt1``: ``w0(X, Y) <= C w1(X - Y + Z, Z) w2(X + Z, Y - Z)``.
    ``vikt2``: as ``vikt1`` with ``w2(Y - Z, X + Z)``.
    ``omegascond``: ``w2(x, xi + eta) <= C w1(x + y, xi) w0(x, xi, eta, y)``.

    The all-zero sample is always included.
    """
    dim = _sample_dim(kind, w0, w1, w2)
    pts = np.vstack([_sobol(samples, dim, box, seed), np.zeros((1, dim))])
    return float(np.max(_domination_ratio(kind, w0, w1, w2, pts)))
