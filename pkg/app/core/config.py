# app/core/config.py
from functools import lru_cache
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Numerical tolerances
    TOLERANCE: float = 1e-12
    NORM_REJECT_TOLERANCE: float = 1e-9
    SPECTRAL_TOLERANCE: float = 1e-10

    # Dense oracles are only built up to this dimension
    DENSE_CAP: int = 4096

    # Randomized equivalence check
    RANDOM_TRIALS: int = 200
    DEFAULT_SEED: int = 0

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True)


# Create a global settings instance
settings = Settings()


@lru_cache()
def get_settings() -> Settings:
    return Settings()
