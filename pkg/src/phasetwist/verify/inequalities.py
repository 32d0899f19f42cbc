"""Inequality suite: norm ratios over a stress orbit.

Every inequality ``||lhs|| <= C ||rhs_1|| ||rhs_2||`` becomes a ratio evaluated
over a deterministic translation-modulation-dilation orbit.  An admissible
tuple passes when all ratios are finite and ``max <= stability_factor *
median``; the maximum is reported as the empirical constant.  Tuples that
fail their admissibility predicate, and the dilation probes, are reported
without pass/fail semantics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import __version__
from ..grid import SampledField, gaussian, hermite, make_grid, phase_grid_for, sample
from ..norms import lp_reduce, mixed_norm_array
from ..spectral import resample
from ..timefreq import NATIVE, stft
from ..weights import (
    Exponent,
    Weight,
    check_leb_exponents,
    check_mixed_leb_exponents,
    check_moderate,
    check_twist_exponents,
    check_weight_domination,
    check_weyl_exponents,
    peetre,
)
from ..weyl import apply_op, twisted_conv, weyl_product
from .config import SuiteConfig
from .corpus import base_orbit, symbol_orbit
from .report import RATIO, Case, Report

__all__ = ["inequality_suite", "GROUPS"]

GROUPS = ("twistedleb", "twistedlebcor", "twistedlebmixed", "algthm1", "algthm2", "Wpseudos", "eststft3", "embeddings")


def _r(p):
    # exact Fraction for string exponents so boundary cases compare equal
    return Exponent.of(p).r


def _conj(p) -> str:
    return str(Exponent.of(p).conjugate())


class _Context:
    """Grids, orbits and cached products shared by the groups."""

    def __init__(self, cfg: SuiteConfig):
        self.cfg = cfg
        self.B = make_grid(1, cfg.n_base)
        self.P = phase_grid_for(self.B)
        # euclidean grid with the phase-grid box: 4d STFTs of symbols live on S x S
        self.S = make_grid(2, cfg.n_symbol, "euclidean")
        self.S4 = self.S.with_dim(4)
        self.B2 = self.B.with_dim(2)
        n = cfg.orbit_size
        self.sa = symbol_orbit(cfg.seed, self.P, n, cfg.orbit, "a")
        self.sb = symbol_orbit(cfg.seed, self.P, n, cfg.orbit, "b")
        self.fa = base_orbit(cfg.seed, self.B, n, cfg.orbit, "a")
        self.g = sample(gaussian((0.0,)), self.B)
        self.sym_window = sample(gaussian((0.0, 0.0)), self.S)
        self._cache: dict = {}
        self._warr: dict = {}

    def cached(self, key, fn):
        if key[-1] is None:
            return fn()
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def conv(self, a, b, i=None) -> SampledField:
        return self.cached(("conv", i), lambda: twisted_conv(a, b))

    def weyl(self, a, b, i=None) -> SampledField:
        return self.cached(("weyl", i), lambda: weyl_product(a, b))

    def symbol_stft_abs(self, a: SampledField) -> np.ndarray:
        """``|V a|`` on the 4d euclidean grid (window: Gaussian on ``R^2``)."""
        return np.abs(stft(resample(a, self.S), self.sym_window, NATIVE).values)

    def base_stft_abs(self, f: SampledField, window: SampledField | None = None) -> np.ndarray:
        return np.abs(stft(f, self.g if window is None else window, NATIVE).values)

    def warr(self, w: Weight, grid) -> np.ndarray:
        key = (w.dim, w.factors, grid.n_per_axis, grid.duality_mode)
        if key not in self._warr:
            self._warr[key] = w.on_grid(grid)
        return self._warr[key]


@dataclass
class _Group:
    """One inequality family.

    ``prep(fields, i)`` returns per-case arrays, ``weigh(data, s)`` applies
    the weights for exponent ``s`` and ``ratio(wdata, params)`` evaluates one
    tuple.  ``admissible(params)`` gates the assertion.
    """

    name: str
    orbit: Callable[[_Context], list]
    prep: Callable
    weigh: Callable
    ratio: Callable
    admissible: Callable
    weight_check: Callable
    describe: Callable
    probe: Callable | None = None


def _lp(arr: np.ndarray, p, cell: float) -> float:
    return float(lp_reduce(arr, tuple(range(arr.ndim)), p, cell))


# ----------------------------------------------------------------- groups


def _twisted_groups(ctx: _Context) -> list[_Group]:
    P = ctx.P
    cell = P.cell_volume
    h = P.spacing

    def orbit(ctx):
        return [((a, b), f"a={da}; b={db}") for (da, a), (db, b) in zip(ctx.sa, ctx.sb)]

    def prep(fields, i):
        a, b = fields
        return np.abs(a.values), np.abs(b.values), np.abs(ctx.conv(a, b, i).values)

    def weigh(data, s):
        w = ctx.warr(peetre(s, 2), P)
        return tuple(x * w for x in data)

    def wcheck(s):
        w = peetre(s, 2)
        return {"additive": check_weight_domination("additive", w, w, w, seed=ctx.cfg.seed)}

    def leb_ratio(wd, prm):
        A, Bm, C = wd
        p, p1, p2 = prm
        return _lp(C, p, cell) / (_lp(A, p1, cell) * _lp(Bm, p2, cell))

    def cor_ratio(wd, prm):
        A, Bm, C = wd
        p, q, order = prm
        if order == "pq":
            return _lp(C, p, cell) / (_lp(A, p, cell) * _lp(Bm, q, cell))
        return _lp(C, p, cell) / (_lp(A, q, cell) * _lp(Bm, p, cell))

    def mixed_ratio(wd, prm):
        A, Bm, C = wd
        p, q, p1, q1, p2, q2, k = prm
        return mixed_norm_array(C, h, p, q, k) / (mixed_norm_array(A, h, p1, q1, k) * mixed_norm_array(Bm, h, p2, q2, k))

    def cor_ok(prm):
        p, q, _ = prm
        return _r(q) >= max(_r(p), 1 - _r(p))

    def probe(lam):
        a = sample(gaussian((0.3, -0.2), (0.2, 0.1), width=lam), P)
        b = sample(gaussian((-0.1, 0.2), (-0.2, 0.3), width=lam), P)
        return (a, b)

    return [
        _Group("twistedleb", orbit, prep, weigh, leb_ratio, lambda prm: check_leb_exponents(*prm), wcheck,
               lambda prm: "p={},p1={},p2={}".format(*prm), probe),
        _Group("twistedlebcor", orbit, prep, weigh, cor_ratio, cor_ok, wcheck,
               lambda prm: "p={},q={},{}".format(*prm)),
        _Group("twistedlebmixed", orbit, prep, weigh, mixed_ratio,
               lambda prm: check_mixed_leb_exponents(*prm[:6]), wcheck,
               lambda prm: "p={},q={},p1={},q1={},p2={},q2={},k{}".format(*prm)),
    ]


def _symbol_groups(ctx: _Context) -> list[_Group]:
    S4 = ctx.S4
    h = S4.spacing

    def orbit(ctx):
        return [((a, b), f"a={da}; b={db}") for (da, a), (db, b) in zip(ctx.sa, ctx.sb)]

    def prep1(fields, i):
        a, b = fields
        return ctx.symbol_stft_abs(a), ctx.symbol_stft_abs(b), ctx.symbol_stft_abs(ctx.weyl(a, b, i))

    def prep2(fields, i):
        a, b = fields
        return ctx.symbol_stft_abs(a), ctx.symbol_stft_abs(b), ctx.symbol_stft_abs(ctx.conv(a, b, i))

    def weigh1(data, s):
        wY = ctx.warr(peetre(s, 4, "Y"), S4)
        return tuple(x * wY for x in data)

    def weigh2(data, s):
        wY = ctx.warr(peetre(s, 4, "Y"), S4)
        wX = ctx.warr(peetre(s, 4, "X"), S4)
        A, Bm, C = data
        return A * wY, Bm * wX, C * wY

    def ratio(order):
        def fn(wd, prm):
            A, Bm, C = wd
            p0, p1, p2, q0, q1, q2 = prm
            return mixed_norm_array(C, h, p0, q0, order) / (
                mixed_norm_array(A, h, p1, q1, order) * mixed_norm_array(Bm, h, p2, q2, order))
        return fn

    def wcheck1(s):
        w = peetre(s, 4, "Y")
        return {"vikt1": check_weight_domination("vikt1", w, w, w, seed=ctx.cfg.seed)}

    def wcheck2(s):
        wY, wX = peetre(s, 4, "Y"), peetre(s, 4, "X")
        return {"vikt2": check_weight_domination("vikt2", wY, wY, wX, seed=ctx.cfg.seed)}

    def probe(lam):
        a = sample(gaussian((0.3, -0.2), (0.2, 0.1), width=lam), ctx.P)
        b = sample(gaussian((-0.1, 0.2), (-0.2, 0.3), width=lam), ctx.P)
        return (a, b)

    desc = lambda prm: "p={},{},{};q={},{},{}".format(*prm)  # noqa: E731
    return [
        _Group("algthm1", orbit, prep1, weigh1, ratio(1), lambda prm: check_weyl_exponents(*prm), wcheck1, desc, probe),
        _Group("algthm2", orbit, prep2, weigh2, ratio(2), lambda prm: check_twist_exponents(*prm), wcheck2, desc, probe),
    ]


def _operator_group(ctx: _Context) -> _Group:
    S4, B2 = ctx.S4, ctx.B2

    def orbit(ctx):
        return [((a, f), f"a={da}; f={df}") for (da, a), (df, f) in zip(ctx.sa, ctx.fa)]

    def prep(fields, i):
        a, f = fields
        u = apply_op(a, 0.0, f)
        return ctx.symbol_stft_abs(a), ctx.base_stft_abs(u), ctx.base_stft_abs(f)

    def weigh(data, s):
        Va, Vu, Vf = data
        w = ctx.warr(peetre(s, 4, "Y"), S4)
        w2 = ctx.warr(peetre(s, 2), B2)
        return Va * w, Vu * w2, Vf * w2

    def ratio(wd, prm):
        Va, Vu, Vf = wd
        p, q = prm
        lhs = mixed_norm_array(Vu, B2.spacing, q, p, 2)
        sym = mixed_norm_array(Va, S4.spacing, q, p, 2)
        fn = mixed_norm_array(Vf, B2.spacing, _conj(p), _conj(q), 1)
        return lhs / (sym * fn)

    def wcheck(s):
        w, w12 = peetre(s, 4, "Y"), peetre(s, 2)
        return {"omegascond": check_weight_domination("omegascond", w, w12, w12, seed=ctx.cfg.seed)}

    return _Group("Wpseudos", orbit, prep, weigh, ratio, lambda prm: True, wcheck, lambda prm: "p={},q={}".format(*prm))


def _window_group(ctx: _Context) -> _Group:
    B2 = ctx.B2
    h = B2.spacing
    psi = sample(hermite(1), ctx.B)
    V_phi_psi = ctx.base_stft_abs(psi, ctx.g)

    def orbit(ctx):
        return [((f,), f"f={df}") for df, f in ctx.fa]

    def prep(fields, i):
        (f,) = fields
        return ctx.base_stft_abs(f, ctx.g), ctx.base_stft_abs(f, psi), V_phi_psi

    def weigh(data, s):
        w = ctx.warr(peetre(s, 2), B2)
        return tuple(x * w for x in data)

    def ratio(wd, prm):
        Vphi, Vpsi, Vpp = wd
        p, q, p0, q0, k = prm
        return mixed_norm_array(Vphi, h, p, q, k) / (mixed_norm_array(Vpsi, h, p, q, k) * mixed_norm_array(Vpp, h, p0, q0, k))

    def ok(prm):
        p, q, p0, q0, _ = prm
        lower = max(_r(p), 1 - _r(p), _r(q), 1 - _r(q))
        return _r(p0) >= lower and _r(q0) >= lower

    def wcheck(s):
        w = peetre(s, 2)
        return {"moderate": check_moderate(w, w, seed=ctx.cfg.seed)}

    return _Group("eststft3", orbit, prep, weigh, ratio, ok, wcheck,
                  lambda prm: "p={},q={},p0={},q0={},k{}".format(*prm))


def _embedding_group(ctx: _Context) -> _Group:
    B, B2 = ctx.B, ctx.B2
    h = B2.spacing

    def orbit(ctx):
        return [((f,), f"f={df}") for df, f in ctx.fa]

    def prep(fields, i):
        (f,) = fields
        return ctx.base_stft_abs(f), np.abs(f.values)

    def weigh(data, s):
        V, F = data
        full = ctx.warr(peetre(s, 2), B2)
        xonly = ctx.warr(peetre(s, 2, "x"), B2)
        w1 = ctx.warr(peetre(s, 1), B)
        return V * full, V * xonly, F * w1

    def ratio(wd, prm):
        Vfull, Vx, F = wd
        p, q, rel = prm
        if rel == "WM":
            return mixed_norm_array(Vfull, h, p, q, 1) / mixed_norm_array(Vfull, h, p, q, 2)
        if rel == "MW":
            return mixed_norm_array(Vfull, h, p, q, 2) / mixed_norm_array(Vfull, h, p, q, 1)
        if rel == "WL":
            return _lp(F, p, B.spacing) / mixed_norm_array(Vx, h, p, q, 2)
        if rel == "LW":
            return mixed_norm_array(Vx, h, p, q, 2) / _lp(F, p, B.spacing)
        raise ValueError(f"unknown embedding relation {rel!r}")

    def ok(prm):
        p, q, rel = prm
        rp, rq = _r(p), _r(q)
        return {
            "WM": rp >= rq,
            "MW": rp <= rq,
            "WL": rq >= max(rp, 1 - rp),
            "LW": rq <= min(rp, 1 - rp),
        }.get(rel, False)

    def wcheck(s):
        w = peetre(s, 2)
        return {"moderate": check_moderate(w, w, seed=ctx.cfg.seed)}

    return _Group("embeddings", orbit, prep, weigh, ratio, ok, wcheck, lambda prm: "p={},q={},{}".format(*prm))


# ----------------------------------------------------------------- driver


def _params(group: str, raw: list) -> list[tuple]:
    """Expand configured tuples into ratio parameters (``twistedlebcor`` gets
    both argument orders)."""
    out = []
    for t in raw:
        t = [str(x) for x in t]
        if group == "twistedlebcor":
            out.extend([(t[0], t[1], "pq"), (t[0], t[1], "qp")])
        elif group == "twistedlebmixed":
            out.append(tuple(t[:6]) + (int(t[6]),))
        elif group == "eststft3":
            out.append(tuple(t[:4]) + (int(t[4]),))
        else:
            out.append(tuple(t))
    return out


def _stability_case(cfg, group, key, s, ratios, inputs, details, mode) -> Case:
    r = np.asarray(ratios, dtype=float)
    finite = bool(np.all(np.isfinite(r)) and np.all(r > 0))
    stats = {"n": int(r.size)}
    if finite:
        mx, med = float(np.max(r)), float(np.median(r))
        stats.update({"max": mx, "median": med, "min": float(np.min(r)), "constant": mx})
        value = mx / med
    else:
        stats["nonfinite"] = int(np.sum(~np.isfinite(r)))
        value = math.inf
    stats.update(details)
    if mode == "asserted":
        passed = finite and value <= cfg.stability_factor
        return Case(f"{group}/{key}/s{s:g}", group, RATIO, value, cfg.stability_factor, passed, inputs, mode, stats)
    return Case(f"{group}/{key}/s{s:g}", group, RATIO, value, None, None, inputs, mode, stats)


def _run_group(ctx: _Context, grp: _Group, report: Report) -> None:
    cfg = ctx.cfg
    params = _params(grp.name, cfg.tuples.get(grp.name, []))
    gated = [(prm, bool(grp.admissible(prm))) for prm in params]
    svals = [float(s) for s in cfg.weights_s]
    ratios = {(k, s): [] for k in range(len(gated)) for s in svals}
    cases = grp.orbit(ctx)
    for i, (fields, _) in enumerate(cases):
        try:
            data = grp.prep(fields, i)
        except Exception:  # noqa: BLE001 - recorded as a non-finite ratio
            for key in ratios:
                ratios[key].append(math.nan)
            continue
        for s in svals:
            wd = grp.weigh(data, s)
            for k, (prm, _) in enumerate(gated):
                try:
                    ratios[(k, s)].append(grp.ratio(wd, prm))
                except (ValueError, ZeroDivisionError, FloatingPointError):
                    ratios[(k, s)].append(math.nan)
    wchecks = {s: grp.weight_check(s) for s in svals}
    inputs = f"orbit of {len(cases)} cases"
    for k, (prm, adm) in enumerate(gated):
        for s in svals:
            mode = "asserted" if adm else "falsification"
            det = {"weights": f"peetre s={s:g}", "weight_constant": wchecks[s], "admissible": adm}
            report.add(_stability_case(cfg, grp.name, grp.describe(prm), s, ratios[(k, s)], inputs, det, mode))


def _run_probe(ctx: _Context, grp: _Group, raw: list, report: Report) -> None:
    """Ratios of inadmissible tuples under dilation; report only."""
    dil = [float(x) for x in ctx.cfg.falsification_dilations]
    fields = [grp.probe(lam) for lam in dil]
    data = [grp.weigh(grp.prep(f, None), 0.0) for f in fields]
    for prm in _params(grp.name, raw):
        adm = bool(grp.admissible(prm))
        vals = [grp.ratio(d, prm) for d in data]
        growth = max(vals) / min(vals) if min(vals) > 0 else math.inf
        details = {"dilations": dil, "ratios": vals, "admissible": adm,
                   "monotone": bool(np.all(np.diff(vals) > 0) or np.all(np.diff(vals) < 0)),
                   "growth_flag": bool(growth > 2.0)}
        report.add(Case(f"{grp.name}/probe/{grp.describe(prm)}", grp.name, RATIO, growth, None, None,
                        "gaussian pair under dilation", "falsification", details))


def inequality_suite(cfg: SuiteConfig | None = None) -> Report:
    """Run the inequality suite and return its report."""
    cfg = cfg or SuiteConfig()
    report = Report("inequalities", __version__, cfg.to_dict())
    wanted = [g for g in GROUPS if not cfg.groups or g in cfg.groups]
    if not wanted:
        return report
    ctx = _Context(cfg)
    builders = {
        "twistedleb": lambda: _twisted_groups(ctx),
        "algthm1": lambda: _symbol_groups(ctx),
        "Wpseudos": lambda: [_operator_group(ctx)],
        "eststft3": lambda: [_window_group(ctx)],
        "embeddings": lambda: [_embedding_group(ctx)],
    }
    groups: dict[str, _Group] = {}
    for b in builders.values():
        for grp in b():
            groups[grp.name] = grp
    for name in wanted:
        _run_group(ctx, groups[name], report)
    for name, raw in cfg.falsification.items():
        if name in wanted and groups[name].probe is not None:
            _run_probe(ctx, groups[name], raw, report)
    return report
