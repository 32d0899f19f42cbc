"""Suite reports and their JSON / CSV serialisation."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

__all__ = ["Case", "Report", "emit_report", "merge_reports", "read_report"]

RELATIVE_ERROR = "relative-error"
RATIO = "ratio"

CSV_COLUMNS = ("suite", "id", "group", "kind", "mode", "value", "threshold", "pass", "inputs")


def _clean(v):
    """JSON-safe copy: non-finite floats become ``None``, numpy scalars plain."""
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


@dataclass
class Case:
    """One check.

    ``mode`` is ``"asserted"`` (counts towards pass/fail) or
    ``"falsification"`` / ``"report"`` (recorded only, ``passed`` is None).
    """

    id: str
    group: str
    kind: str
    value: float | None
    threshold: float | None
    passed: bool | None
    inputs: str = ""
    mode: str = "asserted"
    details: dict = field(default_factory=dict)
    suite: str = ""

    @classmethod
    def error_case(cls, id, group, kind, threshold, inputs, exc: BaseException, mode: str = "asserted") -> "Case":
        return cls(id, group, kind, None, threshold, False if mode == "asserted" else None, inputs, mode,
                   {"error": f"{type(exc).__name__}: {exc}"})

    @classmethod
    def relative(cls, id, group, value, threshold, inputs="", **details) -> "Case":
        ok = value is not None and math.isfinite(value) and value <= threshold
        return cls(id, group, RELATIVE_ERROR, float(value), float(threshold), bool(ok), inputs, "asserted", details)

    def to_dict(self) -> dict:
        return _clean({
            "id": self.id,
            "kind": self.kind,
            "value": self.value,
            "threshold": self.threshold,
            "pass": self.passed,
            "suite": self.suite,
            "group": self.group,
            "mode": self.mode,
            "inputs": self.inputs,
            "details": self.details,
        })


def _stats(values) -> dict:
    vals = [v for v in values if v is not None and math.isfinite(v)]
    if not vals:
        return {"max": None, "median": None, "n": 0}
    return {"max": float(np.max(vals)), "median": float(np.median(vals)), "n": len(vals)}


@dataclass
class Report:
    suite: str
    version: str
    config_echo: dict
    cases: list[Case] = field(default_factory=list)
    timestamp: str | None = None

    def add(self, case: Case) -> None:
        case.suite = case.suite or self.suite
        self.cases.append(case)

    @property
    def asserted(self) -> list[Case]:
        return [c for c in self.cases if c.mode == "asserted"]

    @property
    def failures(self) -> list[Case]:
        return [c for c in self.asserted if not c.passed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        asserted = self.asserted
        out = _stats(c.value for c in asserted)
        out["n"] = len(asserted)
        out["passed"] = sum(1 for c in asserted if c.passed)
        out["failed"] = len(asserted) - out["passed"]
        out["report_only"] = len(self.cases) - len(asserted)
        out["by_kind"] = {k: _stats(c.value for c in asserted if c.kind == k) for k in (RELATIVE_ERROR, RATIO)}
        return out

    def to_dict(self) -> dict:
        return _clean({
            "suite": self.suite,
            "version": self.version,
            "timestamp": self.timestamp,
            "config_echo": self.config_echo,
            "cases": [c.to_dict() for c in self.cases],
            "summary": self.summary(),
        })

    def table(self) -> str:
        """Per-group summary lines for terminal output."""
        groups: dict[str, list[Case]] = {}
        for c in self.cases:
            groups.setdefault(f"{c.suite}:{c.group}", []).append(c)
        lines = [f"{'group':38s} {'cases':>5s} {'fail':>5s} {'max value':>14s}"]
        for name, cs in groups.items():
            asserted = [c for c in cs if c.mode == "asserted"]
            fails = sum(1 for c in asserted if not c.passed)
            st = _stats(c.value for c in (asserted or cs))
            mx = "-" if st["max"] is None else f"{st['max']:.6g}"
            tag = "" if asserted else " (report only)"
            lines.append(f"{name:38s} {len(cs):5d} {fails:5d} {mx:>14s}{tag}")
        s = self.summary()
        lines.append(f"asserted {s['n']}, passed {s['passed']}, failed {s['failed']}, report-only {s['report_only']}")
        return "\n".join(lines)


def merge_reports(name: str, reports: list[Report]) -> Report:
    if not reports:
        raise ValueError("nothing to merge")
    out = Report(name, reports[0].version, reports[0].config_echo, timestamp=reports[0].timestamp)
    for r in reports:
        for c in r.cases:
            out.add(c)
    return out


def emit_report(report: Report, path, fmt: str = "json", stamp: bool = True) -> None:
    """Write ``report`` as JSON or CSV with a stable field order.

    ``stamp`` sets the timestamp (the only field that differs between
    otherwise identical runs).
    """
    if stamp:
        report.timestamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps(report.to_dict(), indent=1) + "\n")
    elif fmt == "csv":
        path.write_text(report_csv(report))
    else:
        raise ValueError(f"unknown report format {fmt!r}")


def report_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["# " + json.dumps({"suite": report.suite, "version": report.version, "timestamp": report.timestamp})])
    w.writerow(CSV_COLUMNS)
    for c in report.cases:
        d = c.to_dict()
        w.writerow(["" if d[k] is None else repr(d[k]) if isinstance(d[k], float) else d[k] for k in CSV_COLUMNS])
    return buf.getvalue()


def read_report(path) -> dict:
    return json.loads(Path(path).read_text())
