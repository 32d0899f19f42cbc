import csv
import json
import math

import numpy as np
import pytest

from phasetwist.grid import make_grid, phase_grid_for
from phasetwist.verify import Case, Report, SuiteConfig, emit_report, identity_suite, inequality_suite, load_config, merge_reports
from phasetwist.verify.corpus import base_corpus, base_orbit, symbol_corpus
from phasetwist.verify.report import read_report


def test_config_requires_seed_and_known_keys(tmp_path):
    with pytest.raises(ValueError):
        SuiteConfig.from_dict({"n_base": 256})
    with pytest.raises(ValueError):
        SuiteConfig.from_dict({"seed": 1, "bogus": 2})
    with pytest.raises(ValueError):
        SuiteConfig(n_base=256, n_phase=32)
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"seed": 5, "thresholds": {"exact": 1e-9}}))
    cfg = load_config(p)
    assert cfg.seed == 5 and cfg.thresholds["exact"] == 1e-9 and cfg.thresholds["identity"] == 1e-5
    assert SuiteConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()


def test_corpus_deterministic():
    B = make_grid(1, 256)
    a = base_corpus(3, B, 9)
    b = base_corpus(3, B, 9)
    assert [d for d, _ in a] == [d for d, _ in b]
    assert all(np.array_equal(x.values, y.values) for (_, x), (_, y) in zip(a, b))
    assert [d for d, _ in base_corpus(4, B, 9)] != [d for d, _ in a]
    kinds = {d.split("(")[0] for d, _ in a}
    assert len(kinds) == 3
    P = phase_grid_for(B)
    assert all(f.grid == P for _, f in symbol_corpus(3, P, 4))


def test_orbit_fields_normalizable():
    B = make_grid(1, 256)
    orbit = base_orbit(1, B, 20, {"shift": 1.0, "modulation": 1.0, "dilation": [0.8, 1.25]})
    assert len(orbit) == 20
    assert all(math.isfinite(f.l2_norm()) and f.l2_norm() > 0 for _, f in orbit)


def _report():
    r = Report("demo", "0.0", {"seed": 1})
    r.add(Case.relative("a/1", "g", 1e-12, 1e-10))
    r.add(Case("b/1", "g", "ratio", 3.0, 50.0, True, "x", "asserted", {"max": 0.1 + 0.2}))
    r.add(Case("c/1", "g", "ratio", math.inf, None, None, "x", "falsification"))
    return r


def test_report_summary_and_gating():
    r = _report()
    s = r.summary()
    assert s["n"] == 2 and s["passed"] == 2 and s["report_only"] == 1
    assert r.ok
    r.add(Case.relative("d/1", "g", 1.0, 1e-10))
    assert not r.ok and len(r.failures) == 1


def test_empty_report(tmp_path):
    r = Report("empty", "0.0", {})
    emit_report(r, tmp_path / "e.json")
    data = read_report(tmp_path / "e.json")
    assert data["cases"] == [] and data["summary"]["n"] == 0


def test_json_roundtrip_and_csv(tmp_path):
    r = _report()
    emit_report(r, tmp_path / "r.json")
    emit_report(r, tmp_path / "r.csv", "csv")
    data = read_report(tmp_path / "r.json")
    assert [c["value"] for c in data["cases"]] == [1e-12, 3.0, None]
    assert data["cases"][1]["details"]["max"] == 0.1 + 0.2
    assert set(data) >= {"suite", "version", "config_echo", "cases", "summary"}
    assert set(data["cases"][0]) >= {"id", "kind", "value", "threshold", "pass"}
    rows = list(csv.reader((tmp_path / "r.csv").read_text().splitlines()))
    assert len(rows) - 2 == len(data["cases"])
    assert float(rows[2][5]) == 1e-12


def test_merge_reports():
    m = merge_reports("all", [_report(), _report()])
    assert len(m.cases) == 6 and m.suite == "all"
    assert {c.suite for c in m.cases} == {"demo"}


def test_identity_subset_passes():
    cfg = SuiteConfig(corpus_size=6, groups=["exactness", "anchors"])
    r = identity_suite(cfg)
    assert r.cases and r.ok, r.table()
    assert {c.group for c in r.cases} == {"exactness", "anchors"}


def test_identity_forced_failure():
    cfg = SuiteConfig(corpus_size=4, groups=["exactness"], thresholds={"exact": 0.0})
    assert not identity_suite(cfg).ok


def test_inequality_small_orbit_and_gating():
    cfg = SuiteConfig(orbit_size=8, groups=["twistedleb"], weights_s=[0, 1])
    r = inequality_suite(cfg)
    asserted = r.asserted
    assert asserted and all(c.passed for c in asserted)
    fals = [c for c in r.cases if c.mode == "falsification"]
    assert fals and all(c.passed is None for c in fals)
    # p = p1 = p2 = inf grows under dilation
    probe = [c for c in fals if "inf" in c.id][0]
    assert probe.details["growth_flag"]
    for c in asserted:
        assert c.details["constant"] == c.details["max"] and c.details["n"] == 8


def test_inadmissible_tuple_is_not_asserted():
    cfg = SuiteConfig(orbit_size=4, groups=["twistedleb"], weights_s=[0], tuples={"twistedleb": [["4", "4", "4"]]})
    r = inequality_suite(cfg)
    main = [c for c in r.cases if "/probe/" not in c.id]
    assert main and all(c.mode == "falsification" for c in main)
    assert r.ok
