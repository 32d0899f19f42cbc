import json
import subprocess
import sys

import numpy as np
import pytest

from phasetwist.cli import format_scalar, main
from phasetwist.fieldio import read_field, write_field
from phasetwist.grid import SampledField, gaussian, make_grid, sample
from phasetwist.norms import modulation_norm, weighted_lp_norm
from phasetwist.spectral import fourier, symplectic_fourier
from phasetwist.timefreq import NATIVE, stft, wigner
from phasetwist.weights import peetre
from phasetwist.weyl import apply_op, twisted_conv, weyl_product


@pytest.fixture
def files(tmp_path, base, phase, g):
    write_field(g, tmp_path / "g.tfa")
    a = sample(gaussian((0.3, -0.2), (0.4, 0.1)), phase)
    b = sample(gaussian((-0.1, 0.4), (0.0, -0.2), width=1.3), phase)
    write_field(a, tmp_path / "a.tfa")
    write_field(b, tmp_path / "b.json")
    write_field(SampledField.zeros(phase), tmp_path / "z.tfa")
    return tmp_path, g, a, b


def run(*args):
    return main([str(x) for x in args])


def test_format_scalar():
    assert format_scalar(1 / 3) == "0.333333333333"
    assert format_scalar(1.0) == "1"


def test_transform_matches_library(files):
    d, g, a, _ = files
    assert run("transform", "--kind", "fourier", "--in", d / "g.tfa", "--out", d / "G.tfa") == 0
    assert np.array_equal(read_field(d / "G.tfa").values, fourier(g).values)
    assert run("transform", "--kind", "symplectic", "--in", d / "a.tfa", "--out", d / "A.tfa") == 0
    assert np.array_equal(read_field(d / "A.tfa").values, symplectic_fourier(a).values)


def test_symplectic_twice_via_diff(files, capsys):
    d, *_ = files
    assert run("transform", "--kind", "symplectic", "--in", d / "a.tfa", "--out", d / "a1.tfa") == 0
    assert run("transform", "--kind", "symplectic", "--in", d / "a1.tfa", "--out", d / "a2.json") == 0
    assert run("diff", d / "a2.json", d / "a.tfa", "--tol", "1e-10") == 0
    assert float(capsys.readouterr().out) <= 1e-10


def test_exit_codes(files, capsys):
    d, *_ = files
    assert run("transform", "--kind", "fourier") == 2
    assert "usage" in capsys.readouterr().err
    assert run("transform", "--kind", "symplectic", "--in", d / "g.tfa", "--out", d / "x.tfa") == 4
    (d / "bad.tfa").write_bytes(b"TFA1\x00")
    assert run("stft", "--in", d / "bad.tfa", "--out", d / "x.tfa") == 3
    assert run("stft", "--in", d / "missing.tfa", "--out", d / "x.tfa") == 3
    assert run("norm", "--in", d / "g.tfa", "--p", "0.5") == 5
    assert run("norm", "--in", d / "g.tfa", "--space", "M", "--p", "2", "--q", "0") == 5
    assert run("norm", "--in", d / "g.tfa", "--p", "2", "--weight", "zz:1") == 2
    assert run("twist", d / "a.tfa", d / "g.tfa", "--out", d / "x.tfa") == 4
    assert run("diff", d / "a.tfa", d / "g.tfa") == 4
    assert run("diff", d / "a.tfa", d / "b.json") == 1
    assert run("bogus") == 2


def test_threads_env(files, monkeypatch):
    d, *_ = files
    monkeypatch.setenv("PHASETWIST_THREADS", "0")
    assert run("norm", "--in", d / "g.tfa", "--p", "2") == 2
    monkeypatch.setenv("PHASETWIST_THREADS", "2")
    assert run("norm", "--in", d / "g.tfa", "--p", "2") == 0


def test_norm_moyal_and_library(files, capsys):
    d, g, *_ = files
    assert run("norm", "--in", d / "g.tfa", "--space", "M", "--p", "2", "--q", "2", "--weight", "all:0") == 0
    assert abs(float(capsys.readouterr().out) - 1.0) <= 1e-6
    assert run("norm", "--in", d / "g.tfa", "--space", "W", "--p", "1", "--q", "inf", "--weight", "x:1,xi:0.5") == 0
    out = capsys.readouterr().out.strip()
    from phasetwist.norms import wiener_norm
    from phasetwist.weights import parse_weight

    assert out == format_scalar(wiener_norm(g, 1, "inf", parse_weight("x:1,xi:0.5", 2), g, NATIVE))
    assert run("norm", "--in", d / "g.tfa", "--p", "3", "--weight", "all:1") == 0
    assert capsys.readouterr().out.strip() == format_scalar(weighted_lp_norm(g, 3, peetre(1.0, 1)))
    assert run("norm", "--in", d / "a.tfa", "--space", "mixed", "--p", "1", "--q", "2", "--order", "2") == 0
    assert float(capsys.readouterr().out) > 0
    assert format_scalar(modulation_norm(g, 2, 2, peetre(0.0, 2), g, NATIVE)) == format_scalar(
        modulation_norm(g, 2, 2, None, g, NATIVE)
    )


def test_compute_commands_match_library(files):
    d, g, a, b = files
    assert run("twist", d / "a.tfa", d / "z.tfa", "--method", "direct", "--out", d / "t0.tfa") == 0
    assert not np.any(read_field(d / "t0.tfa").values)
    assert run("twist", d / "a.tfa", d / "b.json", "--out", d / "t.tfa") == 0
    assert np.array_equal(read_field(d / "t.tfa").values, twisted_conv(a, b).values)
    assert run("weylprod", d / "a.tfa", d / "b.json", "--out", d / "w.tfa") == 0
    assert np.array_equal(read_field(d / "w.tfa").values, weyl_product(a, b).values)
    assert run("op", d / "a.tfa", d / "g.tfa", "--t", "0.5", "--out", d / "u.tfa") == 0
    assert np.array_equal(read_field(d / "u.tfa").values, apply_op(a, 0.5, g).values)
    assert run("stft", "--in", d / "g.tfa", "--native", "--out", d / "s.tfa") == 0
    assert np.array_equal(read_field(d / "s.tfa").values, stft(g, g, NATIVE).values)
    assert run("wigner", "--in", d / "g.tfa", "--out", d / "wv.tfa") == 0
    assert np.array_equal(read_field(d / "wv.tfa").values, wigner(g, g).values)


def test_sample(tmp_path, base):
    assert main(["sample", "--gen", "gauss", "--center", "0.5", "--width", "2", "--out", str(tmp_path / "s.json")]) == 0
    f = read_field(tmp_path / "s.json")
    assert np.array_equal(f.values, sample(gaussian((0.5,), width=2.0), base).values)
    assert main(["sample", "--grid", "phase", "--n", "32", "--gen", "hermite", "--index", "1", "0", "--out", str(tmp_path / "h.tfa")]) == 0
    assert read_field(tmp_path / "h.tfa").grid == make_grid(2, 32, "symplectic")
    assert main(["sample", "--grid", "phase", "--center", "1", "--out", str(tmp_path / "x.tfa")]) == 2


def test_verify_exit_and_csv(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"seed": 3, "corpus_size": 4, "orbit_size": 4, "weights_s": [0],
                               "groups": ["exactness", "embeddings"]}))
    assert main(["verify", "--suite", "all", "--config", str(cfg), "--report", str(tmp_path / "r.csv"), "--format", "csv"]) == 0
    text = (tmp_path / "r.csv").read_text()
    assert "identities" in text and "inequalities" in text
    assert "exactness" in capsys.readouterr().out
    cfg.write_text(json.dumps({"seed": 3, "corpus_size": 4, "groups": ["exactness"], "thresholds": {"exact": 0}}))
    assert main(["verify", "--suite", "identities", "--config", str(cfg)]) == 1
    cfg.write_text("{not json")
    assert main(["verify", "--config", str(cfg)]) == 3
    cfg.write_text(json.dumps({"n_base": 256}))
    assert main(["verify", "--config", str(cfg)]) == 3


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "phasetwist.cli", "transform", "--kind", "fourier"], capture_output=True, text=True)
    assert out.returncode == 2 and "usage" in out.stderr
