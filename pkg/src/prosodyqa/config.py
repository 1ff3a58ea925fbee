"""Run configuration: one JSON file drives every pipeline subcommand."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .prosody import EngineProfile, resolve_profiles


@dataclass
class RunConfig:
    corpus_path: str
    output_dir: str
    profiles: dict[str, EngineProfile]
    unit: str = "sentence"
    seed: int = 0
    group_size: int = 75
    limit_articles: int | None = None
    target_judgments_per_item: int = 3
    trap_ratio: float = 0.1
    traps_path: str | None = None
    tts_mode: str = "mock"
    engines: dict = field(default_factory=dict)
    parallelism: int = 4
    delta_agg: str = "median"
    accept_alternate_codes: bool = False

    def __post_init__(self):
        if self.group_size < 1:
            raise ValueError("group_size must be >= 1")
        if self.target_judgments_per_item < 1:
            raise ValueError("target_judgments_per_item must be >= 1")
        if not 0 <= self.trap_ratio < 1:
            raise ValueError("trap_ratio must be in [0, 1)")
        if self.unit not in ("sentence", "paragraph"):
            raise ValueError(f"unknown unit {self.unit!r}")
        if self.tts_mode not in ("mock", "remote"):
            raise ValueError(f"unknown tts_mode {self.tts_mode!r}")
        if self.delta_agg not in ("median", "mean"):
            raise ValueError(f"unknown delta_agg {self.delta_agg!r}")

    @property
    def out(self) -> Path:
        return Path(self.output_dir)


def load_config(path: str | Path) -> RunConfig:
    """Parse and validate a run-config JSON file."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ValueError(f"config {path} must hold a JSON object")
    known = {
        "corpus_path",
        "output_dir",
        "profiles",
        "unit",
        "seed",
        "group_size",
        "limit_articles",
        "target_judgments_per_item",
        "trap_ratio",
        "traps_path",
        "tts_mode",
        "engines",
        "parallelism",
        "delta_agg",
        "accept_alternate_codes",
    }
    unknown = set(payload) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for required in ("corpus_path", "output_dir"):
        if required not in payload:
            raise ValueError(f"config is missing {required!r}")
    payload = dict(payload)
    payload["profiles"] = resolve_profiles(payload.get("profiles"))
    return RunConfig(**payload)
