"""Utility functions for logging setup, configuration, run ids and manifests."""

import json
import logging
import sys
import uuid
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

import structlog
import yaml
from pydantic import BaseModel, Field, ValidationError

from .errors import ConfigurationError, ReportIOError
from .schema import RunManifest

logger = structlog.get_logger(__name__)


def configure_logging(level: str = "INFO", fmt: str = "json") -> None:
    """Configure structlog to emit JSON lines on stderr; fmt="console" renders for humans."""
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, level.upper(), logging.INFO),
        force=True,
    )
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            structlog.dev.ConsoleRenderer() if fmt == "console" else structlog.processors.JSONRenderer(),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


class ArithmeticSettings(BaseModel):
    """Caps on field degrees and enumeration sizes."""
    oracle_degree_cap: int = Field(24, ge=1, description="Largest extension degree for the torsion oracle")
    u_series_degree_cap: int = Field(192, ge=1, description="Largest field degree for u-series coefficients")
    quotient_cap: int = Field(2_000_000, ge=1, description="Largest finite quotient enumerated by coset counts")
    default_series_precision: int = Field(16, ge=1, description="Default tau^-1 precision")


class ExperimentSettings(BaseModel):
    """Defaults for the experiment commands."""
    workers: int = Field(1, ge=1, description="Worker processes")
    default_prec_j: int = Field(1, ge=1, description="Default bucket precision")
    output_dir: str = Field("data/runs", description="Where manifests are written")
    tv_tolerances: Dict[int, float] = Field(default_factory=dict, description="TV tolerance by degree")


class TowerSettings(BaseModel):
    """Bounds for the Artin-Schreier tower certificate search."""
    max_prime_degree: int = Field(4, ge=1, description="Largest prime degree tried as certificate")
    max_extension_degree: int = Field(64, ge=1, description="Largest residue extension opened")


class LoggingSettings(BaseModel):
    """Logging options."""
    level: str = Field("INFO", description="Log level")
    format: str = Field("json", description="Renderer: json or console")


class Settings(BaseModel):
    """Validated contents of config.yaml."""
    arithmetic: ArithmeticSettings = Field(default_factory=ArithmeticSettings)
    experiments: ExperimentSettings = Field(default_factory=ExperimentSettings)
    tower: TowerSettings = Field(default_factory=TowerSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)


class TimestampManager:
    """Timestamp management utilities."""

    @staticmethod
    def generate_run_id() -> str:
        """Generate a unique run identifier."""
        return f"run_{datetime.now().strftime('%Y%m%d_%H%M%S')}_{uuid.uuid4().hex[:8]}"

    @staticmethod
    def get_current_timestamp() -> datetime:
        """Get current timestamp."""
        return datetime.now()

    @staticmethod
    def format_timestamp(dt: datetime) -> str:
        """Format timestamp for file naming."""
        return dt.strftime("%Y%m%d_%H%M%S")


class ConfigManager:
    """Configuration management utilities."""

    @staticmethod
    def load_config(config_path: Path) -> Dict[str, Any]:
        """Load configuration from a YAML file; a missing file yields an empty mapping."""
        if not config_path.exists():
            logger.info("Configuration file not found, using defaults", config_path=str(config_path))
            return {}
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                config = yaml.safe_load(f) or {}
            logger.info("Configuration loaded", config_path=str(config_path))
        except (OSError, yaml.YAMLError) as e:
            logger.error("Failed to load configuration", config_path=str(config_path), error=str(e))
            raise ConfigurationError(f"cannot read {config_path}: {e}") from e
        if not isinstance(config, dict):
            raise ConfigurationError(f"{config_path} must contain a mapping")
        return config

    @staticmethod
    def load_settings(config_path: Optional[Path] = None) -> Settings:
        """Load and validate config.yaml into Settings."""
        raw = ConfigManager.load_config(config_path) if config_path is not None else {}
        try:
            return Settings.model_validate(raw)
        except ValidationError as e:
            logger.error("Invalid configuration", config_path=str(config_path), error=str(e))
            raise ConfigurationError(f"invalid configuration: {e}") from e


class ManifestWriter:
    """Manifest writing utilities."""

    def __init__(self, output_dir: Path):
        self.output_dir = output_dir
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def write_run_manifest(self, manifest: RunManifest) -> Path:
        """Write run manifest to JSON."""
        timestamp = TimestampManager.format_timestamp(manifest.started)
        filepath = self.output_dir / f"run_manifest_{manifest.run_id}_{timestamp}.json"
        try:
            with open(filepath, "w", encoding="utf-8") as f:
                json.dump(manifest.model_dump(), f, indent=2, default=str)
        except OSError as e:
            raise ReportIOError(f"cannot write {filepath}: {e}") from e
        logger.info("Run manifest written", filepath=str(filepath))
        return filepath
