import os
from dataclasses import dataclass, fields
from pathlib import Path

import yaml
from dotenv import load_dotenv

PROFILES = ("thm2.1", "thm2.2", "thm3.2", "cor4.3")


@dataclass
class Config:
    """Configuration management for the Levi-Civita workbench."""

    # Reproducibility
    seed: int = 0

    # Numeric tolerances
    kakutani_tolerance: float = 1e-9
    residual_tolerance: float = 1e-8
    fit_round_tolerance: float = 1e-9
    fit_max_denominator: int = 1000
    ill_conditioned_threshold: float = 1e12

    # Sampling grids
    grid_points: int = 20
    grid_low: float = -1.0
    grid_high: float = 1.0

    # Batch settings
    max_concurrency: int = 8
    suite_count: int = 25

    default_profile: str = "thm2.1"

    @classmethod
    def load(cls, config_file: Path | None = None) -> "Config":
        """Load configuration from an optional YAML file and the environment."""

        # Load environment variables (only for .env file support)
        load_dotenv()

        config_data = {}

        if config_file and config_file.exists():
            with open(config_file) as f:
                config_data = yaml.safe_load(f) or {}

        known = {f.name for f in fields(cls)}
        unknown = set(config_data) - known
        if unknown:
            raise ValueError(f"Unknown configuration keys: {', '.join(sorted(unknown))}")

        env_overrides = {
            "seed": ("LEVI_CIVITA_SEED", int),
            "max_concurrency": ("LEVI_CIVITA_MAX_CONCURRENCY", int),
            "residual_tolerance": ("LEVI_CIVITA_RESIDUAL_TOLERANCE", float),
        }
        for key, (env_name, cast) in env_overrides.items():
            value = os.getenv(env_name)
            if value is not None and value.strip() != "":
                config_data[key] = cast(value)

        return cls(**config_data)

    def validate(self) -> None:
        """Validate configuration settings."""
        if self.max_concurrency < 1:
            raise ValueError("max_concurrency must be at least 1")
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")
        if self.grid_low >= self.grid_high:
            raise ValueError("grid_low must be smaller than grid_high")
        if self.fit_max_denominator < 1:
            raise ValueError("fit_max_denominator must be at least 1")
        if self.suite_count < 1:
            raise ValueError("suite_count must be at least 1")
        for name in (
            "kakutani_tolerance",
            "residual_tolerance",
            "fit_round_tolerance",
            "ill_conditioned_threshold",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.default_profile not in PROFILES:
            raise ValueError(f"default_profile must be one of {', '.join(PROFILES)}")
