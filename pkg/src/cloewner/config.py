"""Run configuration and output metadata.

Every artifact (CSV, JSON, SVG) carries the same reproducibility block:
tool version, the configuration echo, and the driver fingerprint.  The
echo holds everything that affects the numbers; thread count and output
paths are deliberately left out because results must not depend on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError

TOOL_NAME = "cloewner"
TOOL_VERSION = "0.1.0"

_RESOLUTION_KEYS = ("nx", "ny", "resolution")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    driver_path: str
    params: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    threads: int = 1

    def __post_init__(self):
        for key, value in self.params.items():
            if key.endswith("tol") and not value > 0:
                raise DomainError(f"tolerance {key} must be positive, got {value}")
        for key in _RESOLUTION_KEYS:
            if key in self.params and int(self.params[key]) < 2:
                raise DomainError(f"{key} must be at least 2")
        if self.threads < 1:
            raise DomainError("thread count must be at least 1")

    def echo(self) -> dict:
        body = {"subcommand": self.subcommand, "driver": self.driver_path}
        for key in sorted(self.params):
            value = self.params[key]
            body[key] = list(value) if isinstance(value, tuple) else value
        return body


def build_meta(config: RunConfig, fingerprint: str) -> dict:
    return {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "config": config.echo(),
        "driver_fingerprint": fingerprint,
    }
