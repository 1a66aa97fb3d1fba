"""Experiment configuration for the property battery and convergence studies."""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Optional

from .errors import ConfigError

__all__ = ["SUITES", "ExperimentConfig", "load_config", "parse_sizes", "SEED_ENV"]

SUITES = ("trace", "duality", "cocycle", "grassmann", "orbit", "symplectic", "convergence")
SEED_ENV = "RESGRASS_SEED"


@dataclass(frozen=True)
class ExperimentConfig:
    p: float = 2.0
    gamma: float = 1.0
    sizes: tuple = ((4, 4), (8, 8), (16, 16))
    trials: int = 50
    seed: int = 0
    decay_alpha: float = 2.0
    suites: tuple = SUITES
    output_path: Optional[str] = None
    magnitude: float = 1.0

    def __post_init__(self):
        sizes = tuple(tuple(int(x) for x in s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "suites", tuple(self.suites))
        self.validate()

    def validate(self):
        if not 1.0 <= float(self.p) <= 2.0:
            raise ConfigError(f"p must lie in [1, 2], got {self.p}")
        if float(self.gamma) == 0.0 or not math.isfinite(float(self.gamma)):
            raise ConfigError("gamma must be a nonzero real")
        if not self.sizes:
            raise ConfigError("sizes must be nonempty")
        for s in self.sizes:
            if len(s) != 2 or min(s) < 1:
                raise ConfigError(f"invalid size {s}; expected a pair of positive integers")
        totals = [a + b for a, b in self.sizes]
        if any(b <= a for a, b in zip(totals, totals[1:])):
            raise ConfigError("sizes must have strictly increasing total dimension")
        if isinstance(self.trials, bool) or int(self.trials) != self.trials or self.trials < 0:
            raise ConfigError(f"trials must be a nonnegative integer, got {self.trials}")
        if self.decay_alpha < 0:
            raise ConfigError("decay_alpha must be >= 0")
        if self.magnitude < 0:
            raise ConfigError("magnitude must be >= 0")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s) {unknown}; registered: {', '.join(SUITES)}")
        if not -(2**63) <= int(self.seed) < 2**64:
            raise ConfigError("seed must fit in 64 bits")

    def with_overrides(self, **kwargs) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sizes"] = [list(s) for s in self.sizes]
        d["suites"] = list(self.suites)
        return d


def parse_sizes(text: str) -> tuple:
    """Parse ``"a,b;c,d"`` into ``((a, b), (c, d))``."""
    try:
        return tuple(tuple(int(x) for x in chunk.split(",")) for chunk in text.split(";") if chunk.strip())
    except ValueError as exc:
        raise ConfigError(f"cannot parse sizes {text!r}") from exc


def load_config(path=None, env=None) -> ExperimentConfig:
    """Read a JSON config (all keys optional) and apply the seed environment override."""
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    known = set(ExperimentConfig.__dataclass_fields__)
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown config keys: {sorted(extra)}")
    env = os.environ if env is None else env
    if env.get(SEED_ENV):
        try:
            data["seed"] = int(env[SEED_ENV])
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV} must be an integer") from exc
    try:
        return ExperimentConfig(**data)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
