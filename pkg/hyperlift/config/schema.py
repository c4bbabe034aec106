"""
Configuration schema for hyperlift.

Settings are loaded from a YAML or JSON file (default: ~/.hyperlift/config.yaml).
Individual fields can be overridden via environment variables using the
HYPERLIFT_ prefix (e.g., HYPERLIFT_NUMERIC__PRECISION_BITS=512).
"""

from __future__ import annotations

import io
import json
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, model_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict
from ruamel.yaml import YAML

DEFAULT_CONFIG_PATH = Path.home() / ".hyperlift" / "config.yaml"

_YAML_SUFFIXES = (".yaml", ".yml")


class NumericConfig(BaseModel):
    """Working precision and limits for numeric evaluation."""

    precision_bits: int = Field(default=256, ge=64)
    max_terms: int = Field(default=20000, gt=0)
    # None: pass threshold 10^-(0.15 * precision_bits)
    tail_exponent: float | None = None


class VerificationConfig(BaseModel):
    """Defaults for single verifications and the randomized suite."""

    order: int = Field(default=16, ge=1)
    seed: int = 42
    cases: int = Field(default=20, ge=1)
    k_max: int = 3
    size_max: int = 6
    pairing_cases: int = Field(default=10, ge=1)
    workers: int = 1


class Settings(BaseSettings):
    """Root configuration object for hyperlift."""

    model_config = SettingsConfigDict(env_prefix="HYPERLIFT_", env_nested_delimiter="__")

    numeric: NumericConfig = Field(default_factory=NumericConfig)
    verification: VerificationConfig = Field(default_factory=VerificationConfig)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # Environment beats values read from the config file.
        return env_settings, init_settings, dotenv_settings, file_secret_settings

    @model_validator(mode="after")
    def _validate_ranges(self) -> Settings:
        """
        Cross-field checks pydantic field constraints cannot express alone.

        Raises:
            ValueError: On a negative k_max or size_max, or fewer than one worker.
        """
        v = self.verification
        if v.k_max < 0:
            raise ValueError(f"verification.k_max must be >= 0, got {v.k_max}")
        if v.size_max < 0:
            raise ValueError(f"verification.size_max must be >= 0, got {v.size_max}")
        if v.workers < 1:
            raise ValueError(f"verification.workers must be >= 1, got {v.workers}")
        return self

    @classmethod
    def load(cls, path: Path = DEFAULT_CONFIG_PATH) -> Settings:
        """
        Load settings from a YAML (.yaml/.yml) or JSON file.

        Missing keys use their default values, then environment overrides apply.
        The file is optional; if it doesn't exist, only defaults and the
        environment apply.
        """
        if not path.exists():
            return cls()
        text = path.read_text(encoding="utf-8")
        data: Any
        if path.suffix in _YAML_SUFFIXES:
            data = YAML(typ="safe").load(text) or {}
        else:
            data = json.loads(text)
        return cls(**data)

    def save(self, path: Path = DEFAULT_CONFIG_PATH) -> None:
        """Persist settings as YAML or JSON, chosen by the file suffix."""
        path.parent.mkdir(parents=True, exist_ok=True)
        if path.suffix in _YAML_SUFFIXES:
            buffer = io.StringIO()
            YAML(typ="safe").dump(self.model_dump(mode="json"), buffer)
            path.write_text(buffer.getvalue(), encoding="utf-8")
            return
        path.write_text(self.model_dump_json(indent=2, exclude_none=False), encoding="utf-8")
