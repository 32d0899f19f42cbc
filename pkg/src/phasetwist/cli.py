"""``phasetwist`` command-line front end.

Exit codes
----------
0  success
1  assertion failure (``verify`` cases, ``diff`` above tolerance)
2  bad flags or invalid arguments
3  malformed or unreadable field / config file
4  grid-mode mismatch
5  inadmissible exponent
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .fieldio import MalformedFieldFile, read_field, write_field
from .grid import DualityMode, GridModeMismatch, SampledField, SpaceTag, gaussian, hermite, make_grid, sample
from .estimators import NormTransformer, _make_window
from .spectral import fourier, partial_fourier, symplectic_fourier
from .timefreq import NATIVE, stft, wigner
from .weights import InadmissibleExponent
from .weyl import apply_op, twisted_conv, weyl_product

__all__ = ["main", "build_parser", "format_scalar"]

EXIT_OK, EXIT_FAIL, EXIT_FLAGS, EXIT_MALFORMED, EXIT_MODE, EXIT_EXPONENT = range(6)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # keep argparse's usage text but let main() own the exit
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def format_scalar(x: float) -> str:
    """Decimal with 12 significant digits."""
    return format(float(x), ".12g")


def _threads() -> int:
    raw = os.environ.get("PHASETWIST_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise _UsageError(f"PHASETWIST_THREADS must be a positive integer, got {raw!r}")
    return n


def _read(path) -> SampledField:
    try:
        return read_field(path)
    except OSError as exc:
        raise MalformedFieldFile(f"cannot read {path}: {exc}") from exc


def _write(f: SampledField, path, fmt) -> None:
    write_field(f, path, fmt)


# ------------------------------------------------------------------ commands


def cmd_transform(args) -> int:
    f = _read(args.inp)
    if args.kind == "fourier":
        out = fourier(f, inverse=args.inverse)
    elif args.kind == "partial2":
        out = partial_fourier(f, "second", inverse=args.inverse)
    else:
        # the symplectic transform is its own inverse
        out = symplectic_fourier(f)
    _write(out, args.out, args.format)
    return EXIT_OK


def cmd_stft(args) -> int:
    f = _read(args.inp)
    g = _read(args.window_file) if args.window_file else _make_window(args.window, f.grid)
    _write(stft(f, g, NATIVE if args.native else None), args.out, args.format)
    return EXIT_OK


def cmd_wigner(args) -> int:
    f = _read(args.inp)
    g = _read(args.other) if args.other else f
    _write(wigner(f, g), args.out, args.format)
    return EXIT_OK


def cmd_twist(args) -> int:
    a, b = _read(args.a), _read(args.b)
    _write(twisted_conv(a, b, args.method), args.out, args.format)
    return EXIT_OK


def cmd_op(args) -> int:
    a, f = _read(args.symbol), _read(args.field)
    _write(apply_op(a, args.t, f, args.method), args.out, args.format)
    return EXIT_OK


def cmd_weylprod(args) -> int:
    a, b = _read(args.a), _read(args.b)
    _write(weyl_product(a, b, args.method), args.out, args.format)
    return EXIT_OK


def norm_value(f: SampledField, space: str, p, q=None, order=1, weight: str = "", window: str = "gauss") -> float:
    """The scalar printed by ``phasetwist norm``."""
    est = NormTransformer(space=space, p=p, q=q, order=int(order), weight=weight, window=window)
    return float(est.fit_transform(f)[0, 0])


def cmd_norm(args) -> int:
    f = _read(args.inp)
    val = norm_value(f, args.space, args.p, args.q, args.order, args.weight, args.window)
    print(format_scalar(val))
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.grid == "base":
        grid = make_grid(1, args.n, "euclidean")
    elif args.grid == "phase":
        grid = make_grid(2, args.n, "symplectic")
    else:
        grid = make_grid(2, args.n, "euclidean")
    d = grid.dim
    if args.gen == "zero":
        f = SampledField(grid, np.zeros(grid.shape, dtype=complex))
    elif args.gen == "hermite":
        idx = args.index or [0]
        if len(idx) == 1:
            idx = idx * d
        f = sample(hermite(*idx), grid)
    else:
        center = args.center or [0.0] * d
        mod = args.mod or [0.0] * d
        if len(center) != d or len(mod) != d:
            raise _UsageError(f"--center and --mod need {d} values on this grid")
        f = sample(gaussian(tuple(center), tuple(mod), width=args.width, chirp=args.chirp), grid)
    if grid.duality_mode is DualityMode.SYMPLECTIC:
        f = SampledField(grid, f.values, SpaceTag.PHASE)
    _write(f, args.out, args.format)
    return EXIT_OK


def cmd_diff(args) -> int:
    a, b = _read(args.a), _read(args.b)
    if a.grid.duality_mode is not b.grid.duality_mode:
        raise GridModeMismatch("fields have different duality modes")
    if a.grid.dim != b.grid.dim or not a.grid.same_lattice(b.grid):
        raise GridModeMismatch("fields live on different grids")
    num = float(np.linalg.norm((a.values - b.values).ravel()))
    den = float(np.linalg.norm(b.values.ravel()))
    val = num / den if den > 0 else num
    print(format_scalar(val))
    return EXIT_OK if val <= args.tol else EXIT_FAIL


def cmd_verify(args) -> int:
    from .verify import emit_report, identity_suite, inequality_suite, load_config, merge_reports

    try:
        cfg = load_config(args.config)
    except OSError as exc:
        raise MalformedFieldFile(f"cannot read config {args.config}: {exc}") from exc
    except ValueError as exc:
        raise MalformedFieldFile(f"invalid config: {exc}") from exc
    reports = []
    if args.suite in ("identities", "all"):
        reports.append(identity_suite(cfg))
    if args.suite in ("inequalities", "all"):
        reports.append(inequality_suite(cfg))
    report = reports[0] if len(reports) == 1 else merge_reports("all", reports)
    if args.report:
        emit_report(report, args.report, args.format)
    print(report.table())
    return EXIT_OK if report.ok else EXIT_FAIL


# ------------------------------------------------------------------ parser


def _field_out(p):
    p.add_argument("--out", required=True, help="output field file")
    p.add_argument("--format", choices=["tfa", "json"], default=None, help="output format (default from suffix)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="phasetwist", description="Time-frequency transforms, twisted convolution and Weyl calculus.")
    ap.add_argument("--version", action="version", version=f"phasetwist {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("transform", help="Fourier, symplectic or partial Fourier transform")
    p.add_argument("--kind", choices=["fourier", "symplectic", "partial2"], required=True)
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--in", dest="inp", required=True)
    _field_out(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("stft", help="short-time Fourier transform")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--window", default="gauss", help="gauss or hermite:n")
    p.add_argument("--window-file", default=None)
    p.add_argument("--native", action="store_true", help="keep the euclidean dual lattice")
    _field_out(p)
    p.set_defaults(func=cmd_stft)

    p = sub.add_parser("wigner", help="cross-Wigner distribution")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--with", dest="other", default=None, help="second field (default: same as --in)")
    _field_out(p)
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("twist", help="twisted convolution of two symbols")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--method", choices=["direct", "kernel"], default="direct")
    _field_out(p)
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("op", help="apply Op_t(a) to a field")
    p.add_argument("symbol")
    p.add_argument("field")
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--method", choices=["kernel", "quadrature"], default="kernel")
    _field_out(p)
    p.set_defaults(func=cmd_op)

    p = sub.add_parser("weylprod", help="Weyl product of two symbols")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--method", choices=["twist", "kernel"], default="twist")
    _field_out(p)
    p.set_defaults(func=cmd_weylprod)

    p = sub.add_parser("norm", help="weighted Lebesgue, mixed, modulation or Wiener norm")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--space", choices=["mixed", "M", "W", "Lp"], default="Lp")
    p.add_argument("--p", required=True)
    p.add_argument("--q", default=None)
    p.add_argument("--order", choices=["1", "2"], default="1")
    p.add_argument("--weight", default="", help='e.g. "x:1,xi:0" or "all:2"')
    p.add_argument("--window", default="gauss", help="gauss or hermite:n")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("sample", help="sample a generator on a grid")
    p.add_argument("--gen", choices=["gauss", "hermite", "zero"], default="gauss")
    p.add_argument("--grid", choices=["base", "phase", "euclid2"], default="base")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--center", type=float, nargs="+", default=None)
    p.add_argument("--mod", type=float, nargs="+", default=None)
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--chirp", type=float, default=0.0)
    p.add_argument("--index", type=int, nargs="+", default=None)
    _field_out(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run the identity and/or inequality suites")
    p.add_argument("--suite", choices=["identities", "inequalities", "all"], default="all")
    p.add_argument("--config", default=None)
    p.add_argument("--report", default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("diff", help="relative l2 difference of two fields")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_diff)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _threads()
        return args.func(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_FLAGS
    except MalformedFieldFile as exc:
        print(f"phasetwist: malformed file: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except GridModeMismatch as exc:
        print(f"phasetwist: grid mismatch: {exc}", file=sys.stderr)
        return EXIT_MODE
    except InadmissibleExponent as exc:
        print(f"phasetwist: inadmissible exponent: {exc}", file=sys.stderr)
        return EXIT_EXPONENT
    except ValueError as exc:
        print(f"phasetwist: {exc}", file=sys.stderr)
        return EXIT_FLAGS


if __name__ == "__main__":
    sys.exit(main())
