from typing import Literal
from pydantic_settings import BaseSettings, SettingsConfigDict
from functools import lru_cache


class Settings(BaseSettings):
    """Run settings loaded from ECGRAPH_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="ECGRAPH_", env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    # Worker pool (0 means one worker per core)
    threads: int = 0

    # Exhaustive t-e.c. search
    ec_budget: int = 10**12  # word-operations
    word_bits: int = 64

    # Size caps for the dense / exhaustive oracles
    numerical_cap: int = 3000
    cheeger_cap: int = 20
    jumbled_exhaustive_cap: int = 16

    # Sampling
    seed: int = 0
    samples: int = 10_000
    mixing_chunk: int = 1000  # samples per seed-derived stream

    # Reports
    float_digits: int = 12
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
