"""
Configuration Manager for densepoints
Named run profiles with hot reload, merged over the environment settings
"""
import json
from datetime import datetime
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional

try:
    import yaml
    HAS_YAML = True
except ImportError:
    HAS_YAML = False

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from core.config.settings import Settings, settings as default_settings
from core.exceptions.handlers import ConfigurationError
from core.logging.setup import get_logger
from models.configs import DecodeConfig, GroupPoolConfig, SamplingBandConfig
from models.enums import CodecDefaults, Decoder, Strategy
from models.geometry import SamplerSeed

logger = get_logger("config_manager")


class RunConfig(BaseModel):
    """Fully merged configuration of one CLI run"""
    model_config = ConfigDict(extra="forbid")

    delta: float = Field(CodecDefaults.DELTA, ge=0.0)
    seed: int = Field(CodecDefaults.SEED, ge=0, lt=2**64)
    tau: float = Field(CodecDefaults.TAU, gt=0.0, lt=1.0)
    hull_k: int = Field(CodecDefaults.HULL_K, ge=3)
    strategies: List[Strategy] = Field(default_factory=lambda: [Strategy.DTS])
    decoders: List[Decoder] = Field(default_factory=lambda: [Decoder.TRIANGULATION])
    n_values: List[int] = Field(default_factory=lambda: list(CodecDefaults.TABLE8_N_VALUES))
    workers: int = Field(1, ge=1)
    corpus_size: int = Field(200, ge=1)
    image_size: int = Field(128, ge=8)
    sigma: float = Field(1.0, ge=0.0)
    groups: int = Field(CodecDefaults.GROUPS, ge=1)
    attribute_bins: int = Field(CodecDefaults.ATTRIBUTE_BINS, ge=1)
    channels: int = Field(CodecDefaults.CHANNELS, ge=1)
    progress: bool = False
    annotations: Optional[Path] = None
    reports_dir: Path = Field(default_factory=lambda: Path("reports"))

    @field_validator("n_values")
    @classmethod
    def validate_n_values(cls, v):
        if not v or any(n < 1 for n in v):
            raise ValueError("n_values must be a non-empty list of positive counts")
        if list(v) != sorted(v):
            raise ValueError("n_values must be sorted ascending")
        return v

    def band(self) -> SamplingBandConfig:
        return SamplingBandConfig(delta=self.delta)

    def decode_config(self) -> DecodeConfig:
        return DecodeConfig(tau=self.tau, hull_k=self.hull_k)

    def group_pool_config(self) -> GroupPoolConfig:
        return GroupPoolConfig(k=self.groups)

    def sampler_seed(self) -> SamplerSeed:
        return SamplerSeed(self.seed)


def settings_defaults(config: Settings) -> Dict[str, Any]:
    """Flatten the environment settings into RunConfig keys"""
    return {
        "delta": config.sampling.delta,
        "seed": config.sampling.seed,
        "tau": config.decode.tau,
        "hull_k": config.decode.hull_k,
        "strategies": list(config.harness.strategies),
        "decoders": list(config.harness.decoders),
        "n_values": list(config.harness.n_values),
        "workers": config.harness.workers,
        "corpus_size": config.harness.corpus_size,
        "image_size": config.harness.image_size,
        "sigma": config.harness.sigma,
        "groups": config.field_ops.groups,
        "attribute_bins": config.field_ops.attribute_bins,
        "channels": config.field_ops.channels,
        "progress": config.harness.progress,
        "reports_dir": config.harness.reports_dir,
    }


DEFAULT_PROFILES: Dict[str, Dict[str, Any]] = {
    "table8": {
        "name": "Table 8 reproduction",
        "description": "DTS + triangulation over the full n list; pass --annotations for COCO val",
        "settings": {
            "strategies": ["dts"],
            "decoders": ["triangulation"],
            "n_values": [9, 25, 49, 81, 225, 441, 729],
        },
    },
    "surrogate": {
        "name": "Synthetic surrogate",
        "description": "200 synthetic 128x128 masks, every strategy and decoder",
        "settings": {
            "strategies": ["boundary", "grid", "dts"],
            "decoders": ["triangulation", "concave", "grid"],
            "n_values": [9, 25, 49, 81, 225, 441, 729],
            "corpus_size": 200,
            "image_size": 128,
        },
    },
    "smoke": {
        "name": "Smoke run",
        "description": "Small corpus and n values for a quick end-to-end check",
        "settings": {
            "strategies": ["dts"],
            "decoders": ["triangulation"],
            "n_values": [9, 25],
            "corpus_size": 12,
            "image_size": 48,
        },
    },
}


class ConfigManager:
    """Run profiles from config/profiles.json (or .yaml), reloaded when the file changes"""

    def __init__(self, config_dir: Optional[Path] = None, config: Optional[Settings] = None):
        self.settings = config or default_settings
        self.config_dir = Path(config_dir or self.settings.config_dir)
        self.profiles_file = self._locate_profiles_file()

        self._profiles: Dict[str, Any] = {}
        self._profiles_mtime = 0.0

        self._load_profiles()
        logger.debug(f"Configuration Manager initialized with config dir: {self.config_dir}")

    def _locate_profiles_file(self) -> Path:
        if HAS_YAML:
            for name in ("profiles.yaml", "profiles.yml"):
                candidate = self.config_dir / name
                if candidate.exists():
                    return candidate
        return self.config_dir / "profiles.json"

    def _load_profiles(self):
        """Load run profiles, writing the defaults when no file exists"""
        if not self.profiles_file.exists():
            self._create_default_profiles()
            return
        try:
            text = self.profiles_file.read_text()
            if self.profiles_file.suffix in (".yaml", ".yml"):
                profiles = yaml.safe_load(text) or {}
            else:
                profiles = json.loads(text)
        except (OSError, ValueError) as e:
            raise ConfigurationError(f"Failed to load profiles from {self.profiles_file}: {e}", field="profiles")
        if not isinstance(profiles, dict):
            raise ConfigurationError(f"{self.profiles_file} must map profile names to profiles", field="profiles")
        self._profiles = profiles
        self._profiles_mtime = self.profiles_file.stat().st_mtime
        logger.debug("Loaded profiles configuration", extra={"profiles": sorted(profiles)})

    def _create_default_profiles(self):
        self._profiles = json.loads(json.dumps(DEFAULT_PROFILES))
        try:
            self._save_profiles()
        except ConfigurationError as e:
            # read-only checkout: keep the defaults in memory
            logger.warning(str(e))
            return
        logger.info("Created default profiles configuration", extra={"path": str(self.profiles_file)})

    def _save_profiles(self):
        try:
            self.config_dir.mkdir(parents=True, exist_ok=True)
            with open(self.profiles_file, "w") as f:
                if self.profiles_file.suffix in (".yaml", ".yml"):
                    yaml.safe_dump(self._profiles, f, sort_keys=True)
                else:
                    json.dump(self._profiles, f, indent=2, default=str)
            self._profiles_mtime = self.profiles_file.stat().st_mtime
        except OSError as e:
            raise ConfigurationError(f"Failed to save profiles: {e}", field="profiles")

    def _refresh_if_needed(self):
        """Reload profiles if the file has been modified"""
        if not self.profiles_file.exists():
            return
        if self.profiles_file.stat().st_mtime > self._profiles_mtime:
            logger.info("Reloading profiles configuration (file modified)")
            self._load_profiles()

    def get_all_profiles(self) -> Dict[str, Any]:
        self._refresh_if_needed()
        return dict(self._profiles)

    def get_profile_config(self, profile_name: str) -> Dict[str, Any]:
        """Get configuration for a specific profile"""
        profiles = self.get_all_profiles()
        if profile_name not in profiles:
            raise ConfigurationError(
                f"Profile '{profile_name}' not found; available: {', '.join(sorted(profiles))}",
                field="profile"
            )
        return profiles[profile_name]

    def create_profile(self, name: str, description: str, profile_settings: Dict[str, Any]):
        """Validate and store a new profile"""
        self.get_merged_config(overrides=profile_settings)
        self._refresh_if_needed()
        self._profiles[name] = {
            "name": name,
            "description": description,
            "settings": profile_settings,
            "created_at": datetime.now().isoformat(),
        }
        self._save_profiles()
        logger.info(f"Created new profile: {name}")

    def get_merged_config(
        self,
        profile: Optional[str] = None,
        overrides: Optional[Dict[str, Any]] = None
    ) -> RunConfig:
        """Settings, then profile settings, then explicit overrides (None values are ignored)"""
        config = settings_defaults(self.settings)

        if profile:
            config.update(self.get_profile_config(profile).get("settings", {}))

        if overrides:
            config.update({key: value for key, value in overrides.items() if value is not None})

        try:
            return RunConfig(**config)
        except ValidationError as e:
            first = e.errors(include_url=False)[0]
            field = ".".join(str(part) for part in first["loc"]) or "config"
            raise ConfigurationError(f"Invalid configuration: {first['msg']}", field=field) from e


@lru_cache(maxsize=1)
def get_config_manager() -> ConfigManager:
    """Process-wide manager over the default config directory"""
    return ConfigManager()
