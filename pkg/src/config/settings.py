from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    table_cache_dir: Path = Field(
        default=Path.home() / ".cache" / "acythin",
        description="Directory holding auto-generated acyclicity tables",
    )

    # Table generation
    jobs: int = Field(default=1, ge=1, description="Worker processes for table generation")

    # Verification limits
    verify_max_cells: int = 100_000
    debug_mv_max_cells: int = 500
    check_invariants: bool = False

    # Collapsibility audit
    collapse_state_budget: int = 200_000
    collapse_sample_size: int = 10_000
    sample_seed: int = 0

    # Logging
    log_level: str = "INFO"
    log_json: bool = False

    model_config = SettingsConfigDict(
        env_prefix="ACYTHIN_", env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )


@lru_cache
def get_settings() -> Settings:
    return Settings()
