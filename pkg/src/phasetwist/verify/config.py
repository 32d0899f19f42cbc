"""Suite configuration (JSON with an explicit seed)."""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["SuiteConfig", "load_config", "DEFAULT_TUPLES", "DEFAULT_FALSIFICATION"]

# exponent tuples per inequality group, as strings so that 6/5 and inf stay exact
DEFAULT_TUPLES: dict[str, list[list[str]]] = {
    # (p0, p1, p2, q0, q1, q2): (p, p, p; p', p', p')
    "algthm1": [[p, p, p, q, q, q] for p, q in (("2", "2"), ("3", "3/2"), ("4", "4/3"), ("6", "6/5"), ("inf", "1"))],
    "algthm2": [[p, p, p, q, q, q] for p, q in (("1", "inf"), ("6/5", "6"), ("4/3", "4"), ("3/2", "3"), ("2", "2"))],
    # (p, p1, p2)
    "twistedleb": [["2", "2", "2"], ["1", "1", "1"], ["3/2", "3/2", "3/2"], ["4", "1", "4"], ["3", "3/2", "3/2"], ["4/3", "4/3", "1"]],
    # (p, q) with q <= min(p, p'); both argument orders are checked
    "twistedlebcor": [["2", "1"], ["2", "2"], ["3", "1"], ["3", "3/2"], ["4/3", "1"], ["3/2", "6/5"]],
    # (p, q, p1, q1, p2, q2, order)
    "twistedlebmixed": [
        ["2", "2", "1", "1", "2", "2", "1"],
        ["4", "4", "1", "1", "4", "4", "2"],
        ["3", "2", "1", "1", "3", "2", "1"],
        ["3/2", "3/2", "3/2", "3/2", "3/2", "3/2", "2"],
        ["3", "3", "3/2", "3/2", "3/2", "3/2", "1"],
        ["2", "2", "2", "2", "2", "2", "2"],
    ],
    # (p, q): symbol in W^{q,p}, f in M^{p',q'}, output in W^{q,p}
    "Wpseudos": [["2", "2"], ["1", "2"], ["2", "1"], ["inf", "1"], ["4", "4/3"], ["1", "inf"]],
    # (p, q, p0, q0, order): windows g and the first Hermite function
    "eststft3": [
        ["2", "2", "2", "2", "1"],
        ["2", "2", "1", "1", "2"],
        ["3", "3", "1", "1", "1"],
        ["3/2", "3/2", "1", "1", "2"],
        ["4", "2", "1", "1", "1"],
        ["2", "4", "4/3", "4/3", "2"],
    ],
    # (p, q, relation): "WM" compares W <= M (p <= q), "MW" compares M <= W (p >= q),
    # "WL"/"LW" the x-weighted chain links W^{p,q1} <= L^p and L^p <= W^{p,q2}
    "embeddings": [
        ["1", "2", "WM"],
        ["2", "4", "WM"],
        ["1", "inf", "WM"],
        ["2", "1", "MW"],
        ["4", "2", "MW"],
        ["inf", "1", "MW"],
        ["3", "3/2", "WL"],
        ["3", "3", "LW"],
    ],
}

# inadmissible tuples probed under dilation; report only
DEFAULT_FALSIFICATION: dict[str, list[list[str]]] = {
    "twistedleb": [["4", "4", "4"], ["inf", "inf", "inf"]],
    "algthm1": [["4", "4", "4", "4", "4", "4"]],
}

_DEFAULTS = {
    "seed": 20240611,
    "n_base": 256,
    "n_phase": 64,
    "n_symbol": 32,
    "n_4d": 16,
    "corpus_size": 30,
    "identity_pairs": 3,
    "points": 10,
    "orbit_size": 100,
    "orbit": {"shift": 1.0, "modulation": 1.0, "dilation": [0.8, 1.25]},
    "weights_s": [0, 1, 2],
    "stability_factor": 50.0,
    "thresholds": {
        "exact": 1e-10,
        "anchor": 1e-6,
        "identity": 1e-5,
        "twist_oracle": 1e-5,
        "op_oracle": 1e-6,
        "norm_oracle": 1e-12,
    },
    "falsification_dilations": [0.5, 0.7, 1.0, 1.4, 2.0],
    "groups": None,
}


@dataclass
class SuiteConfig:
    """Everything that determines a suite run.

    Unknown keys in a config file are rejected; missing keys take defaults.
    """

    seed: int = _DEFAULTS["seed"]
    n_base: int = _DEFAULTS["n_base"]
    n_phase: int = _DEFAULTS["n_phase"]
    n_symbol: int = _DEFAULTS["n_symbol"]
    n_4d: int = _DEFAULTS["n_4d"]
    corpus_size: int = _DEFAULTS["corpus_size"]
    identity_pairs: int = _DEFAULTS["identity_pairs"]
    points: int = _DEFAULTS["points"]
    orbit_size: int = _DEFAULTS["orbit_size"]
    orbit: dict = field(default_factory=lambda: copy.deepcopy(_DEFAULTS["orbit"]))
    weights_s: list = field(default_factory=lambda: list(_DEFAULTS["weights_s"]))
    stability_factor: float = _DEFAULTS["stability_factor"]
    thresholds: dict = field(default_factory=lambda: dict(_DEFAULTS["thresholds"]))
    falsification_dilations: list = field(default_factory=lambda: list(_DEFAULTS["falsification_dilations"]))
    groups: list | None = None
    tuples: dict = field(default_factory=lambda: copy.deepcopy(DEFAULT_TUPLES))
    falsification: dict = field(default_factory=lambda: copy.deepcopy(DEFAULT_FALSIFICATION))

    def __post_init__(self):
        if self.n_base % 4 or self.n_base < 8:
            raise ValueError("n_base must be a multiple of 4 and at least 8")
        if self.n_phase != self.n_base // 4:
            raise ValueError("n_phase must equal n_base / 4 (shared lattice spacing)")
        for name in ("n_symbol", "n_4d"):
            if getattr(self, name) % 2 or getattr(self, name) < 4:
                raise ValueError(f"{name} must be even and at least 4")
        if self.orbit_size < 2:
            raise ValueError("orbit_size must be at least 2")
        thr = dict(_DEFAULTS["thresholds"])
        thr.update(self.thresholds)
        self.thresholds = {k: float(v) for k, v in thr.items()}
        tup = copy.deepcopy(DEFAULT_TUPLES)
        tup.update(self.tuples)
        self.tuples = tup

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_base": self.n_base,
            "n_phase": self.n_phase,
            "n_symbol": self.n_symbol,
            "n_4d": self.n_4d,
            "corpus_size": self.corpus_size,
            "identity_pairs": self.identity_pairs,
            "points": self.points,
            "orbit_size": self.orbit_size,
            "orbit": self.orbit,
            "weights_s": self.weights_s,
            "stability_factor": self.stability_factor,
            "thresholds": self.thresholds,
            "falsification_dilations": self.falsification_dilations,
            "groups": self.groups,
            "tuples": self.tuples,
            "falsification": self.falsification,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "SuiteConfig":
        if not isinstance(obj, dict):
            raise ValueError("config must be a JSON object")
        if "seed" not in obj:
            raise ValueError("config must set an explicit 'seed'")
        known = set(cls.__dataclass_fields__)
        extra = set(obj) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**obj)


def load_config(path=None) -> SuiteConfig:
    """Read a JSON config; ``None`` gives the defaults."""
    if path is None:
        return SuiteConfig()
    return SuiteConfig.from_dict(json.loads(Path(path).read_text()))
