"""Run configuration: defaults, config-file parsing, and precedence.

Precedence when assembling a RunConfig: command-line flags override
config-file entries, which override the QFACE_SEED environment variable
(seed only), which overrides built-in defaults. The config file is
line-oriented ``key = value`` text; unknown keys are hard errors so typos
cannot silently fall back to defaults.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

from . import swaptest
from .exceptions import ConfigError
from .validation import is_power_of_two

ENV_SEED = "QFACE_SEED"

# CLI spelling -> canonical estimator mode
MODE_NAMES = {
    "exact": swaptest.CIRCUIT_EXACT,
    "circuit_exact": swaptest.CIRCUIT_EXACT,
    "analytic": swaptest.ANALYTIC,
    "sampled": swaptest.SAMPLED,
}


@dataclass
class RunConfig:
    dim: int = 64
    mode: str = swaptest.CIRCUIT_EXACT
    shots: int = swaptest.DEFAULT_SHOTS
    seed: int = 0
    threshold_start: float = 0.70
    threshold_step: float = 0.01
    threshold_end: float = 1.00
    train_n: int = 300
    nonface_dir: str | None = None
    nonface_synthetic: int | None = None
    square: str = "crop"
    out: str = "out"

    def validate(self) -> "RunConfig":
        if not isinstance(self.dim, int) or not is_power_of_two(self.dim):
            raise ConfigError(f"dim must be a power of two >= 2, got {self.dim}")
        if self.mode not in swaptest.MODES:
            raise ConfigError(
                f"mode must be one of {sorted(MODE_NAMES)}, got {self.mode!r}"
            )
        if self.mode == swaptest.SAMPLED and self.shots < 1:
            raise ConfigError(f"sampled mode needs shots >= 1, got {self.shots}")
        if self.shots < 0:
            raise ConfigError(f"shots must be >= 0, got {self.shots}")
        if not 0.0 <= self.threshold_start < self.threshold_end <= 1.0:
            raise ConfigError(
                "need 0 <= threshold_start < threshold_end <= 1, got "
                f"[{self.threshold_start}, {self.threshold_end}]"
            )
        if self.threshold_step <= 0:
            raise ConfigError(
                f"threshold_step must be > 0, got {self.threshold_step}"
            )
        if self.train_n < 1:
            raise ConfigError(f"train_n must be >= 1, got {self.train_n}")
        if self.nonface_dir is not None and self.nonface_synthetic is not None:
            raise ConfigError(
                "nonface_dir and nonface_synthetic are mutually exclusive"
            )
        if self.nonface_synthetic is not None and self.nonface_synthetic < 1:
            raise ConfigError(
                f"nonface_synthetic must be >= 1, got {self.nonface_synthetic}"
            )
        if self.square not in ("crop", "squash"):
            raise ConfigError(f"square must be 'crop' or 'squash', got {self.square!r}")
        return self

    def to_text(self) -> str:
        """Serialize as the same key = value format the parser accepts."""
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            lines.append(f"{f.name} = {'none' if value is None else value}")
        return "\n".join(lines) + "\n"


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in ("dim", "shots", "seed", "train_n"):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key} expects an integer, got {raw!r}") from None
    if key.startswith("threshold_"):
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{key} expects a number, got {raw!r}") from None
    if key in ("nonface_dir", "nonface_synthetic"):
        if raw.lower() == "none" or raw == "":
            return None
        if key == "nonface_synthetic":
            try:
                return int(raw)
            except ValueError:
                raise ConfigError(
                    f"{key} expects an integer or 'none', got {raw!r}"
                ) from None
        return raw
    if key == "mode":
        if raw not in MODE_NAMES:
            raise ConfigError(
                f"mode must be one of {sorted(MODE_NAMES)}, got {raw!r}"
            )
        return MODE_NAMES[raw]
    return raw


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """key = value lines; # comments and blank lines ignored."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(
                f"{source}:{lineno}: expected 'key = value', got {stripped!r}"
            )
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        values[key] = _parse_value(key, raw)
    return values


def load_config(config_path=None, overrides=None, env=None) -> RunConfig:
    """Assemble a validated RunConfig honoring the precedence contract."""
    env = os.environ if env is None else env
    cfg = RunConfig()

    raw_seed = env.get(ENV_SEED)
    if raw_seed is not None:
        try:
            cfg.seed = int(raw_seed)
        except ValueError:
            raise ConfigError(
                f"{ENV_SEED} must be an integer, got {raw_seed!r}"
            ) from None

    if config_path is not None:
        path = Path(config_path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        for key, value in parse_config_text(text, source=str(path)).items():
            setattr(cfg, key, value)

    for key, value in (overrides or {}).items():
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown config field {key!r}")
        if key == "mode":
            if value not in MODE_NAMES:
                raise ConfigError(
                    f"mode must be one of {sorted(MODE_NAMES)}, got {value!r}"
                )
            value = MODE_NAMES[value]
        setattr(cfg, key, value)

    return cfg.validate()
