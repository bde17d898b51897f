"""Configuration management for sa-forge CLI."""

import os
from pathlib import Path
from typing import Optional, Dict, Any
from pydantic import BaseModel, Field, field_validator
from dotenv import load_dotenv
import yaml


OUTPUT_FORMATS = ("csv", "plot-data")


class HarnessConfig(BaseModel):
    """Experiment harness defaults."""
    replications: int = Field(default=10, ge=1)
    checkpoints_per_decade: int = Field(default=50, ge=1)
    jobs: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0)
    output_format: str = Field(default="csv")

    @field_validator('output_format')
    @classmethod
    def validate_output_format(cls, v):
        """Validate output format name."""
        if v not in OUTPUT_FORMATS:
            raise ValueError(f"Output format must be one of {list(OUTPUT_FORMATS)}")
        return v


class ConstantsConfig(BaseModel):
    """Estimator and batch reference configuration."""
    kappa_restarts: int = Field(default=20, ge=1)
    kappa_iterations: int = Field(default=200, ge=1)
    kappa_tol: float = Field(default=1e-8, gt=0.0)
    rho_dense_limit: int = Field(default=2000, ge=1)
    reference_tol_scale: float = Field(default=1e-10, gt=0.0)
    reference_max_iter: int = Field(default=100, ge=1)
    separable_norm_scale: float = Field(default=1e3, gt=0.0)


class ProtocolConfig(BaseModel):
    """Real-data protocol and risk evaluation configuration."""
    outlier_factor: float = Field(default=5.0)
    passes: int = Field(default=100, ge=1)
    eval_samples: int = Field(default=20000, ge=1)

    @field_validator('outlier_factor')
    @classmethod
    def validate_outlier_factor(cls, v):
        """Validate outlier factor is positive."""
        if v <= 0.0:
            raise ValueError("Outlier factor must be positive")
        return v


class AppConfig(BaseModel):
    """Application configuration."""
    log_level: str = Field(default="INFO")
    verbose: bool = Field(default=False)

    @field_validator('log_level')
    @classmethod
    def validate_log_level(cls, v):
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of {valid_levels}")
        return v.upper()


class Settings(BaseModel):
    """Main configuration class."""
    harness: HarnessConfig = Field(default_factory=HarnessConfig)
    constants: ConstantsConfig = Field(default_factory=ConstantsConfig)
    protocol: ProtocolConfig = Field(default_factory=ProtocolConfig)
    app: AppConfig = Field(default_factory=AppConfig)

    @classmethod
    def load_config(cls, config_overrides: Optional[Dict[str, Any]] = None) -> "Settings":
        """
        Load configuration from multiple sources with proper precedence:
        1. Command-line arguments (highest priority)
        2. YAML configuration file
        3. Environment variables
        4. .env file values
        5. Default values (lowest priority)
        """
        load_dotenv()

        yaml_config = cls._load_yaml_config()

        config_data = {}
        env_config = cls._load_env_config()
        config_data = cls._merge_config(config_data, env_config)

        if yaml_config:
            config_data = cls._merge_config(config_data, yaml_config)

        if config_overrides:
            config_data = cls._merge_config(config_data, config_overrides)

        return cls(**config_data)

    @classmethod
    def _load_yaml_config(cls) -> Optional[Dict[str, Any]]:
        """Load configuration from YAML file."""
        config_paths = [
            Path("./sa_forge.yaml"),
            Path("./config.yaml"),
            Path.home() / ".sa_forge.yaml"
        ]

        for config_path in config_paths:
            if config_path.exists():
                try:
                    with open(config_path, 'r') as f:
                        return yaml.safe_load(f)
                except yaml.YAMLError as e:
                    raise ValueError(f"Error parsing YAML config file {config_path}: {e}")
                except Exception as e:
                    raise ValueError(f"Error reading config file {config_path}: {e}")

        return None

    @classmethod
    def _load_env_config(cls) -> Dict[str, Any]:
        """Load configuration from environment variables."""
        config = {}

        harness_config = {}
        if os.getenv("SA_FORGE_SEED"):
            harness_config["seed"] = int(os.getenv("SA_FORGE_SEED"))
        if os.getenv("SA_FORGE_JOBS"):
            harness_config["jobs"] = int(os.getenv("SA_FORGE_JOBS"))
        if os.getenv("SA_FORGE_REPLICATIONS"):
            harness_config["replications"] = int(os.getenv("SA_FORGE_REPLICATIONS"))
        if harness_config:
            config["harness"] = harness_config

        app_config = {}
        if os.getenv("SA_FORGE_LOG_LEVEL"):
            app_config["log_level"] = os.getenv("SA_FORGE_LOG_LEVEL")
        if os.getenv("SA_FORGE_VERBOSE"):
            # Support 1, true, True, yes, Yes for enabling verbose
            verbose_val = os.getenv("SA_FORGE_VERBOSE", "").lower()
            app_config["verbose"] = verbose_val in ("1", "true", "yes")
        if app_config:
            config["app"] = app_config

        return config

    @classmethod
    def _merge_config(cls, base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """Merge configuration dictionaries recursively."""
        result = base.copy()

        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = cls._merge_config(result[key], value)
            else:
                result[key] = value

        return result


def get_settings(config_overrides: Optional[Dict[str, Any]] = None) -> Settings:
    """Get application settings with optional overrides."""
    return Settings.load_config(config_overrides)
