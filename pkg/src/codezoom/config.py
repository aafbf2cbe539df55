"""Service/CLI configuration: a JSON file plus environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from typing import Optional

from .llm import LlmConfig

DEFAULT_STATE_DIR = ".codezoom"

_ENV_OVERRIDES = {
    "CODEZOOM_STATE_DIR": "state_dir",
    "CODEZOOM_ENDPOINT_URL": ("llm", "endpoint_url"),
    "CODEZOOM_MODEL": ("llm", "model_name"),
}


@dataclass(frozen=True)
class ServiceConfig:
    state_dir: str = DEFAULT_STATE_DIR
    host: str = "127.0.0.1"
    port: int = 8732
    llm: LlmConfig = field(default_factory=LlmConfig)
    transcript_path: Optional[str] = None
    static_dir: Optional[str] = None


def load_config(path: Optional[str] = None) -> ServiceConfig:
    config = ServiceConfig()
    if path:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        llm = LlmConfig(**raw.get("llm", {}))
        config = ServiceConfig(
            state_dir=raw.get("state_dir", config.state_dir),
            host=raw.get("host", config.host),
            port=raw.get("port", config.port),
            llm=llm,
            transcript_path=raw.get("transcript_path"),
            static_dir=raw.get("static_dir"),
        )
    return apply_env_overrides(config)


def apply_env_overrides(config: ServiceConfig) -> ServiceConfig:
    for var, target in _ENV_OVERRIDES.items():
        value = os.environ.get(var)
        if not value:
            continue
        if target == "state_dir":
            config = replace(config, state_dir=value)
        else:
            _, llm_field = target
            config = replace(config, llm=replace(config.llm, **{llm_field: value}))
    return config
