"""
densepoints configuration management
Centralized, validated configuration with environment support
"""
from typing import Annotated, List
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, NoDecode, SettingsConfigDict
from pathlib import Path

# Ensure .env file is loaded
from dotenv import load_dotenv
load_dotenv()

from models.configs import DecodeConfig, GroupPoolConfig, SamplingBandConfig
from models.enums import Decoder, Strategy

class SamplingSettings(BaseSettings):
    """Point-set encoder configuration"""
    delta: float = Field(0.04, ge=0.0)
    seed: int = Field(0, ge=0, lt=2**64)

    model_config = SettingsConfigDict(env_prefix="DENSEPOINTS_SAMPLING_", extra="ignore")

    def band(self) -> SamplingBandConfig:
        return SamplingBandConfig(delta=self.delta)

class DecodeSettings(BaseSettings):
    """Point-set decoder configuration"""
    tau: float = Field(0.5, gt=0.0, lt=1.0)
    hull_k: int = Field(3, ge=3)

    model_config = SettingsConfigDict(env_prefix="DENSEPOINTS_DECODE_", extra="ignore")

    def decode_config(self) -> DecodeConfig:
        return DecodeConfig(tau=self.tau, hull_k=self.hull_k)

class FieldSettings(BaseSettings):
    """Shared-field kernel and head-cost configuration"""
    groups: int = Field(9, ge=1)
    attribute_bins: int = Field(7, ge=1)
    channels: int = Field(256, ge=1)

    model_config = SettingsConfigDict(env_prefix="DENSEPOINTS_FIELDS_", extra="ignore")

    def group_pool_config(self) -> GroupPoolConfig:
        return GroupPoolConfig(k=self.groups)

class HarnessSettings(BaseSettings):
    """Reconstruction sweep and report configuration"""
    n_values: Annotated[List[int], NoDecode] = Field([9, 25, 49, 81, 225, 441, 729])
    strategies: Annotated[List[Strategy], NoDecode] = Field([Strategy.DTS])
    decoders: Annotated[List[Decoder], NoDecode] = Field([Decoder.TRIANGULATION])
    workers: int = Field(1, ge=1)
    corpus_size: int = Field(200, ge=1)
    image_size: int = Field(128, ge=8)
    sigma: float = Field(1.0, ge=0.0)
    reports_dir: Path = Field(default_factory=lambda: Path("reports"))
    progress: bool = False

    model_config = SettingsConfigDict(env_prefix="DENSEPOINTS_HARNESS_", extra="ignore")

    @field_validator("n_values", mode="before")
    @classmethod
    def parse_n_values(cls, v):
        if isinstance(v, str):
            return [int(item.strip()) for item in v.split(",") if item.strip()]
        return v

    @field_validator("strategies", "decoders", mode="before")
    @classmethod
    def parse_names(cls, v):
        if isinstance(v, str):
            return [item.strip() for item in v.split(",") if item.strip()]
        return v

    @field_validator("n_values")
    @classmethod
    def validate_n_values(cls, v):
        if not v or any(n < 1 for n in v):
            raise ValueError("n_values must be a non-empty list of positive counts")
        if list(v) != sorted(v):
            raise ValueError("n_values must be sorted ascending")
        return v

class LoggingSettings(BaseSettings):
    """Logging configuration"""
    level: str = Field("INFO")
    json_file: bool = False
    logs_dir: Path = Field(default_factory=lambda: Path("logs"))

    model_config = SettingsConfigDict(env_prefix="DENSEPOINTS_LOG_", extra="ignore")

    @field_validator("level")
    @classmethod
    def validate_level(cls, v):
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level

class Settings(BaseSettings):
    """Main application settings"""
    environment: str = Field("development")
    debug: bool = False
    project_name: str = "densepoints"
    version: str = "1.0.0"

    sampling: SamplingSettings = Field(default_factory=SamplingSettings)
    decode: DecodeSettings = Field(default_factory=DecodeSettings)
    field_ops: FieldSettings = Field(default_factory=FieldSettings)
    harness: HarnessSettings = Field(default_factory=HarnessSettings)
    log: LoggingSettings = Field(default_factory=LoggingSettings)

    config_dir: Path = Field(default_factory=lambda: Path("config"))

    model_config = SettingsConfigDict(
        env_prefix="DENSEPOINTS_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator("environment")
    @classmethod
    def validate_environment(cls, v):
        allowed = ["development", "testing", "production"]
        if v not in allowed:
            raise ValueError(f"Environment must be one of {allowed}")
        return v

    def create_directories(self) -> None:
        """Create output directories used by the harness"""
        for directory in (self.harness.reports_dir, self.log.logs_dir):
            directory.mkdir(parents=True, exist_ok=True)


# Global settings instance
settings = Settings()
