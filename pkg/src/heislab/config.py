"""Run configuration: one JSON document, flag overrides, strict validation."""

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path


class ConfigError(Exception):
    """Malformed configuration input."""


DEFAULT_TOLERANCES = {
    "hardy_bound": 0.7985,
    "hardy_convergence": 1e-8,
    "plancherel_defect": 5e-2,
    "slope_rel_err": 0.05,
    "fd_invariant": 1e-5,
    "weak_identity": 5e-3,
    "garofalo_floor": 1e-8,
    "roundtrip": 1e-9,
}


@dataclass
class RunConfig:
    truncation: int = 16
    lambda_min: float = 0.004
    lambda_max: float = 8.0
    lambda_nodes: int = 80           # per frequency sign
    box_halfwidth: float = 5.0
    box_points: int = 44             # per axis
    fd_step: float = 1e-4
    r_nodes: int = 4096
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_dir: str = "out"
    seed: int = 2024
    figures: bool = True

    def __post_init__(self):
        for name in ("truncation", "lambda_nodes", "box_points", "r_nodes"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be at least 1")
            setattr(self, name, int(getattr(self, name)))
        if not self.lambda_min > 0:
            raise ConfigError("lambda_min must be positive")
        if not self.lambda_max > self.lambda_min:
            raise ConfigError("lambda_max must exceed lambda_min")
        if not self.fd_step > 0:
            raise ConfigError("fd_step must be positive")
        merged = dict(DEFAULT_TOLERANCES)
        merged.update(self.tolerances or {})
        for key, val in merged.items():
            if not (isinstance(val, (int, float)) and val > 0):
                raise ConfigError(f"tolerance {key!r} must be positive")
        self.tolerances = merged
        self.seed = int(self.seed)

    @classmethod
    def load(cls, path=None, overrides=None):
        """Defaults, optionally updated from a JSON file, then from flags."""
        doc = {}
        if path is not None:
            try:
                doc = json.loads(Path(path).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") from exc
            if not isinstance(doc, dict):
                raise ConfigError("config document must be a JSON object")
        known = set(cls.__dataclass_fields__)
        extra = {k: v for k, v in doc.items() if k not in known
                 and k not in ("candidate", "cutoffs", "lambda_lo")}
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        kwargs = {k: v for k, v in doc.items() if k in known}
        for k, v in (overrides or {}).items():
            if v is not None:
                kwargs[k] = v
        try:
            cfg = cls(**kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        cfg.raw = doc
        return cfg

    def to_json(self) -> str:
        doc = asdict(self)
        doc.pop("raw", None)
        return json.dumps(doc, sort_keys=True, indent=2)
