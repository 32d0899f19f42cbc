"""Identity suite: every exact relation checked by two evaluation paths."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .. import __version__
from .._interp import interp_matrix
from ..grid import (
    SampledField,
    flip,
    gaussian,
    linear_combo,
    make_grid,
    phase_grid_for,
    sample,
)
from ..norms import mixed_norm
from ..spectral import fourier, resample, symplectic_fourier
from ..timefreq import NATIVE, flip_T, stft, symplectic_stft, wigner
from ..weights import Exponent, peetre
from ..weyl import apply_op, twisted_conv, weyl_product
from .config import SuiteConfig
from .corpus import base_corpus, rng_for, symbol_corpus
from .oracles import naive_mixed_norm
from .report import Case, Report

__all__ = ["identity_suite", "rel_err"]


def rel_err(lhs, rhs) -> float:
    """``max|lhs - rhs| / max(max|lhs|, max|rhs|)``."""
    lhs = np.asarray(getattr(lhs, "values", lhs))
    rhs = np.asarray(getattr(rhs, "values", rhs))
    scale = max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(lhs - rhs)) / scale)


def _sigma(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # sigma((x, xi), (y, eta)) = y xi - x eta, row-wise
    return B[..., 0] * A[..., 1] - A[..., 0] * B[..., 1]


class _Runner:
    """Collects cases; a raising check becomes a failed case."""

    def __init__(self, report: Report):
        self.report = report

    def check(self, id: str, group: str, threshold: float, inputs: str, fn: Callable[[], float | tuple]):
        try:
            out = fn()
        except Exception as exc:  # noqa: BLE001 - a failing check must not abort the suite
            self.report.add(Case.error_case(id, group, "relative-error", threshold, inputs, exc))
            return
        details = {}
        if isinstance(out, tuple):
            out, details = out
        self.report.add(Case.relative(id, group, out, threshold, inputs, **details))


def _lattice_points(rng, grid, count: int, dim: int, spread: int) -> np.ndarray:
    c = grid.n_per_axis // 2
    k = rng.integers(c - spread, c + spread + 1, size=(count, dim))
    return (k - c) * grid.spacing


def identity_suite(cfg: SuiteConfig | None = None) -> Report:
    """Run the identity suite and return its report."""
    cfg = cfg or SuiteConfig()
    report = Report("identities", __version__, cfg.to_dict())
    run = _Runner(report)
    thr = cfg.thresholds
    groups = set(cfg.groups) if cfg.groups else None

    def want(name):
        return groups is None or name in groups

    B = make_grid(1, cfg.n_base)
    P = phase_grid_for(B)
    # euclidean 2D grid with the phase-grid spacing and twice its box
    E = make_grid(2, 2 * P.n_per_axis, "euclidean")
    base = base_corpus(cfg.seed, B, cfg.corpus_size)
    syms = symbol_corpus(cfg.seed, P, cfg.corpus_size)
    npairs = max(1, min(cfg.identity_pairs, len(syms) // 2, len(base) // 4))
    rng = rng_for(cfg.seed, "points")
    g = sample(gaussian((0.0,)), B)

    # ------------------------------------------------------------ exactness
    if want("exactness"):
        for i, (desc, f) in enumerate(base):
            run.check(f"fourier_inversion/{i}", "exactness", thr["exact"], desc,
                      lambda f=f: rel_err(fourier(fourier(f), inverse=True), f))
        for i, (desc, a) in enumerate(syms):
            run.check(f"symplectic_involution/{i}", "exactness", thr["exact"], desc,
                      lambda a=a: rel_err(symplectic_fourier(symplectic_fourier(a)), a))

    # -------------------------------------------------------------- anchors
    if want("anchors"):
        c = P.n_per_axis // 2
        run.check("fourier_gaussian", "anchors", thr["anchor"], "g", lambda: rel_err(fourier(g), g))
        A = SampledField(P, np.exp(-(P.mesh()[0] ** 2 + P.mesh()[1] ** 2)), "phase")
        run.check("symplectic_gaussian", "anchors", thr["anchor"], "exp(-|X|^2)", lambda: rel_err(symplectic_fourier(A), A))
        run.check("stft_gaussian_origin", "anchors", thr["anchor"], "|V_g g(0,0)|",
                  lambda: abs(abs(stft(g, g).values[c, c]) - (2 * math.pi) ** -0.5) / (2 * math.pi) ** -0.5)
        run.check("wigner_gaussian_origin", "anchors", thr["anchor"], "W_gg(0,0)",
                  lambda: abs(wigner(g, g).values[c, c] - math.sqrt(2 / math.pi)) / math.sqrt(2 / math.pi))
        for i, (desc, f) in enumerate(base[:6]):
            win = base[-1 - i][1]

            def moyal(f=f, win=win):
                V = stft(f, win, NATIVE)
                lhs = np.sum(np.abs(V.values) ** 2) * V.grid.cell_volume
                return abs(lhs - f.l2_norm() ** 2 * win.l2_norm() ** 2) / lhs

            run.check(f"moyal_audit/{i}", "anchors", thr["anchor"], desc, moyal)

    pairs = [(syms[2 * k], syms[2 * k + 1]) for k in range(npairs)]
    quads = [tuple(base[4 * k + j] for j in range(4)) for k in range(npairs)]

    # ------------------------------------------------------- twisted / weyl
    if want("twisted"):
        for k, ((da, a), (db, b)) in enumerate(pairs):
            inputs = f"a={da}; b={db}"
            ab = twisted_conv(a, b)
            run.check(f"weylfourier1_first/{k}", "twisted", thr["identity"], inputs,
                      lambda: rel_err(symplectic_fourier(ab), twisted_conv(symplectic_fourier(a), b)))
            run.check(f"weylfourier1_second/{k}", "twisted", thr["identity"], inputs,
                      lambda: rel_err(symplectic_fourier(ab), twisted_conv(flip(a), symplectic_fourier(b))))
            pk = weyl_product(a, b, "kernel")
            run.check(f"weyltwist2/{k}", "twisted", thr["identity"], inputs,
                      lambda: rel_err(symplectic_fourier(pk),
                                      twisted_conv(symplectic_fourier(a), symplectic_fourier(b)) / math.sqrt(2 * math.pi)))
            run.check(f"tvist1/{k}", "twisted", thr["identity"], inputs,
                      lambda: rel_err(pk, twisted_conv(a, symplectic_fourier(b)) / math.sqrt(2 * math.pi)))
        for k, quad in enumerate(quads):
            (d1, f1), (d2, g1), (d3, f2), (d4, g2) = quad
            run.check(f"wigntwconv/{k}", "twisted", thr["identity"], f"f1={d1}; g1={d2}; f2={d3}; g2={d4}",
                      lambda f1=f1, g1=g1, f2=f2, g2=g2: rel_err(
                          twisted_conv(wigner(f1, g1), wigner(f2, g2)), wigner(f1, g2) * flip(f2).inner(g1)))
        Wg = wigner(g, g)
        run.check("wigntwconv_gauss", "twisted", thr["identity"], "f1=g1=f2=g2=g",
                  lambda: rel_err(twisted_conv(Wg, Wg), Wg))

    # ----------------------------------------------------------- timefreq
    if want("timefreq"):
        Phi = sample(linear_combo([(1.0, gaussian((0.1, 0.2), (0.3, -0.2))),
                                   (0.3j, gaussian((-0.2, 0.0), (0.0, 0.4), width=0.8))]), P)
        for k, ((da, a), _) in enumerate(pairs):
            pts = np.hstack([_lattice_points(rng, P, cfg.points, 2, 6), _lattice_points(rng, P, cfg.points, 2, 6)])

            def symplfour(a=a, pts=pts):
                lhs = symplectic_stft(symplectic_fourier(a), symplectic_fourier(Phi), pts)
                swapped = np.hstack([pts[:, 2:], pts[:, :2]])
                rhs = np.exp(2j * _sigma(pts[:, 2:], pts[:, :2])) * symplectic_stft(a, Phi, swapped)
                return rel_err(lhs, rhs), {"points": len(pts)}

            run.check(f"stftsymplfour/{k}", "timefreq", thr["identity"], f"a={da}", symplfour)

        N = P.n_per_axis
        idx = np.arange(N // 4, 3 * N // 4)
        j2 = 2 * idx - N // 2
        B2 = B.with_dim(2)
        for k, quad in enumerate(quads):
            (df, f), (dg, gw) = quad[0], quad[1]
            inputs = f"f={df}; window={dg}"

            def wv(f=f, gw=gw):
                W = np.abs(wigner(f, gw).values[np.ix_(idx, idx)])
                V = 2.0 * np.abs(stft(f, flip(gw)).values[np.ix_(j2, j2)])
                return rel_err(W, V)

            run.check(f"wv_modulus/{k}", "timefreq", thr["identity"], inputs, wv)

            def stft_fourier(f=f, gw=gw):
                lhs = flip_T(stft(fourier(f), fourier(gw), NATIVE))
                x = B.axis()
                rhs = np.exp(1j * np.outer(x, x)) * stft(f, gw, NATIVE).values
                return rel_err(lhs, rhs)

            run.check(f"stft_fourier/{k}", "timefreq", thr["identity"], inputs, stft_fourier)

        # norm relation between W_{f, flip(phi)} and V_phi f with w0 = w(2 .);
        # V lives on the lattice of spacing 2h so that W(x_k) pairs with V(2 x_k)
        G2 = make_grid(2, cfg.n_base // 4, "euclidean")
        norm_cases = [("1", "1", 1, 0), ("2", "2", 1, 1), ("1", "2", 1, 0), ("2", "1", 2, 1),
                      ("3", "3/2", 2, 2), ("inf", "2", 1, 1), ("4", "inf", 2, 0)]
        x2 = B2.mesh()
        for k, quad in enumerate(quads[:2]):
            (df, f), (dg, gw) = quad[0], quad[1]
            W = wigner(f, flip(gw), grid=B2)
            V = stft(f, gw, G2)
            for p, q, order, s in norm_cases:
                w = peetre(s, 2)
                w0 = (1.0 + 4.0 * (x2[0] ** 2 + x2[1] ** 2)) ** (s / 2)
                factor = 2.0 ** (1.0 - float(Exponent.of(p).r) - float(Exponent.of(q).r))
                run.check(f"stftwiennorms/{k}/p{p},q{q},k{order},s{s}", "timefreq", thr["identity"],
                          f"f={df}; window={dg}",
                          lambda W=W, V=V, p=p, q=q, order=order, w=w, w0=w0, factor=factor: rel_err(
                              mixed_norm(W, p, q, order, w0), factor * mixed_norm(V, p, q, order, w)))

    # ------------------------------------------------------------- lemma
    if want("lemma"):
        (da, a1), (db, a2) = pairs[0]
        phi1 = sample(gaussian((0.1, 0.0), (0.0, 0.2)), P)
        phi2 = sample(gaussian((0.0, -0.1), (0.1, 0.0), width=1.2), P)
        Z = P.points()
        h2 = P.cell_volume
        prods = {
            "weyl": (weyl_product(a1, a2), weyl_product(phi1, phi2) * math.pi),
            "twist": (twisted_conv(a1, a2), twisted_conv(phi1, phi2) * 0.5),
        }
        for kind, (prod, phi) in prods.items():
            pts = np.hstack([_lattice_points(rng, P, cfg.points, 2, 5), _lattice_points(rng, P, cfg.points, 2, 5)])

            def lemma(kind=kind, prod=prod, phi=phi, pts=pts):
                lhs = symplectic_stft(prod, phi, pts)
                rhs = np.empty(len(pts), dtype=complex)
                for i, (X0, X1, Y0, Y1) in enumerate(pts):
                    X, Y = np.array([X0, X1]), np.array([Y0, Y1])
                    v1 = symplectic_stft(a1, phi1, np.hstack([X - Y + Z, Z]))
                    if kind == "weyl":
                        v2 = symplectic_stft(a2, phi2, np.hstack([X + Z, Y - Z]))
                        ph = np.exp(2j * _sigma(Z, Y[None]))
                    else:
                        v2 = symplectic_stft(a2, phi2, np.hstack([Y - Z, X + Z]))
                        ph = np.exp(2j * _sigma(X[None], Z - Y[None]))
                    rhs[i] = np.sum(ph * v1 * v2) * h2
                return rel_err(lhs, rhs), {"points": len(pts)}

            run.check(f"lemma_{kind}/0", "lemma", thr["identity"], f"a1={da}; a2={db}", lemma)

    # ------------------------------------------------------------ pairing
    if want("pairing"):
        for k, ((da, a), _) in enumerate(pairs):
            (df, f), (dg, gw) = quads[k][2], quads[k][3]

            def pairing(a=a, f=f, gw=gw):
                lhs = apply_op(a, 0, f).inner(gw)
                TFa = flip_T(fourier(resample(a, E)))
                rhs = TFa.inner(stft(gw, f, E)) / math.sqrt(2 * math.pi)
                return abs(lhs - rhs) / max(abs(lhs), abs(rhs))

            run.check(f"pseudostft2/{k}", "pairing", thr["identity"], f"a={da}; f={df}; g={dg}", pairing)

        phi = g
        Psi = stft(phi, phi, E)
        hE = E.spacing
        Y0, Y1 = E.mesh()
        for k, quad in enumerate(quads[:2]):
            (d1, f1), (d2, f2) = quad[0], quad[1]

            def cordokodj(f1=f1, f2=f2):
                F = stft(f2, f1, E)
                V1 = stft(f1, phi, NATIVE)
                V2 = stft(f2, phi, NATIVE)
                b1 = B.with_dim(1)

                def at(V, x, xi):
                    return (interp_matrix(b1, np.array([x])) @ V.values @ interp_matrix(b1, np.array([xi])).T)[0, 0]

                errs, scale = [], 0.0
                for _ in range(cfg.points):
                    kk = rng.integers(-6, 7, size=2)
                    x, xi = kk * hE
                    eta, y = rng.uniform(-1.5, 1.5, size=2)
                    lhs = abs(at(V1, -x - y, eta) * at(V2, -y, xi + eta))
                    shifted = np.roll(Psi.values, tuple(kk), axis=(0, 1))
                    rhs = abs(np.sum(F.values * np.conj(shifted) * np.exp(-1j * (Y0 * eta + Y1 * y))) * hE * hE / (2 * math.pi))
                    errs.append(abs(lhs - rhs))
                    scale = max(scale, lhs, rhs)
                return max(errs) / scale, {"points": cfg.points}

            run.check(f"cordokodj/{k}", "pairing", thr["identity"], f"f1={d1}; f2={d2}", cordokodj)

    # ------------------------------------------------------------ oracles
    if want("oracles"):
        for k, ((da, a), (db, b)) in enumerate(pairs[:2]):
            run.check(f"twist_direct_kernel/{k}", "oracles", thr["twist_oracle"], f"a={da}; b={db}",
                      lambda a=a, b=b: rel_err(twisted_conv(a, b, "direct"), twisted_conv(a, b, "kernel")))
        (da, a), _ = pairs[0]
        df, f = base[0]
        for t in (0.0, 0.5, 1.0):
            run.check(f"op_kernel_quadrature/t{t:g}", "oracles", thr["op_oracle"], f"a={da}; f={df}",
                      lambda t=t: rel_err(apply_op(a, t, f, "kernel"), apply_op(a, t, f, "quadrature")))
            one = SampledField(P, np.ones(P.shape), "phase")
            run.check(f"op_unit_symbol/t{t:g}", "oracles", thr["op_oracle"], f"a=1; f={df}",
                      lambda t=t, one=one: rel_err(apply_op(one, t, f), f))
        run.check("op_rank_one", "oracles", thr["op_oracle"], f"a=sqrt(2pi) W_gg; f={df}",
                  lambda: rel_err(apply_op(wigner(g, g) * math.sqrt(2 * math.pi), 0.5, f), g * f.inner(g)))
        one = SampledField(P, np.ones(P.shape), "phase")
        _, (db, b) = pairs[0]
        run.check("weyl_unit_twist", "oracles", thr["op_oracle"], f"a=1; b={db}",
                  lambda: rel_err(weyl_product(one, b, "twist"), b))
        run.check("weyl_unit_kernel", "oracles", thr["twist_oracle"], f"a=1; b={db}",
                  lambda: rel_err(weyl_product(one, b, "kernel"), b))
        Wg = wigner(g, g)
        run.check("weyl_composition", "oracles", thr["twist_oracle"], f"W_gg; f={df}",
                  lambda: rel_err(apply_op(weyl_product(Wg, Wg), 0.5, f), apply_op(Wg, 0.5, apply_op(Wg, 0.5, f))))
        # full-field symplectic STFT against pointwise quadrature on a small grid
        S = make_grid(2, cfg.n_4d, "symplectic")
        a_s = sample(gaussian((0.2, -0.1), (0.3, 0.1)), S)
        w_s = sample(gaussian((0.0, 0.1), (0.1, 0.0), width=1.1), S)

        def full_vs_points():
            full = symplectic_stft(a_s, w_s)
            kk = rng.integers(0, cfg.n_4d, size=(cfg.points, 4))
            pts = S.axis()[kk]
            return rel_err(full.values[tuple(kk.T)], symplectic_stft(a_s, w_s, pts))

        run.check("symplectic_stft_full_points", "oracles", thr["exact"], f"n_4d={cfg.n_4d}", full_vs_points)
        # mixed norm against the loop-order oracle
        nrng = np.random.default_rng([cfg.seed, 41])
        exps = ["1", "3/2", "2", "3", "inf"]
        for i in range(100):
            vals = nrng.normal(size=P.shape) + 1j * nrng.normal(size=P.shape)
            p, q = exps[nrng.integers(5)], exps[nrng.integers(5)]
            order = int(nrng.integers(1, 3))
            s = float(nrng.choice([0.0, 1.0, 2.0]))
            F = SampledField(P, vals, "phase")
            w = peetre(s, 2)

            def norm_case(F=F, p=p, q=q, order=order, w=w):
                fast = mixed_norm(F, p, q, order, w)
                slow = naive_mixed_norm(F.values, P.spacing, Exponent.of(p).p, Exponent.of(q).p, order, w.on_grid(P))
                return abs(fast - slow) / slow

            run.check(f"mixed_norm_naive/{i}", "oracles", thr["norm_oracle"], f"p={p},q={q},k{order},s={s:g}", norm_case)
    return report
