"""Engine configuration: key=value file plus flag overrides."""

from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import ConfigError
from .ranking import RankerConfig


@dataclass
class EngineConfig:
    embedding_path: str | None = None
    pattern_path: str | None = None
    backend_endpoint: str | None = None
    gamma: float = 0.8
    epsilon: float = 0.001
    threshold: float = 0.8
    top_k_masks: int = 3
    num_return: int = 1
    seed: int = 0

    def __post_init__(self):
        try:
            RankerConfig(self.gamma, self.epsilon)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.top_k_masks < 1:
            raise ConfigError("top_k_masks must be >= 1")
        if self.num_return < 1:
            raise ConfigError("num_return must be >= 1")
        if not (0.0 < self.threshold < 1.0):
            raise ConfigError("threshold must be in (0, 1)")

    def ranker(self) -> RankerConfig:
        return RankerConfig(self.gamma, self.epsilon)


_FIELD_TYPES = {f.name: f.type for f in fields(EngineConfig)}
_INT_KEYS = {"top_k_masks", "num_return", "seed"}
_FLOAT_KEYS = {"gamma", "epsilon", "threshold"}


def load_config(path) -> EngineConfig:
    """Parse a plain-text `key=value` file; `#` starts a comment."""
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _FIELD_TYPES:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                if key in _INT_KEYS:
                    values[key] = int(value)
                elif key in _FLOAT_KEYS:
                    values[key] = float(value)
                else:
                    values[key] = value
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}") from exc
    return EngineConfig(**values)
