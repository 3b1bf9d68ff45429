from pathlib import Path
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict

PACKAGE_DIR = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):

    model_config = SettingsConfigDict(env_file=".env", env_prefix="TORVAN_", extra="ignore")

    # General
    PROJECT_NAME: str = "torvan - Tor vanishing workbench"

    # Resolution bounds
    DEFAULT_BOUND: Optional[int] = None  # overrides every computed default when set
    EXTRA_BOUND: int = 6  # resolutions default: dim R + EXTRA_BOUND
    PAIRING_EXTRA_BOUND: int = 10  # pairings default: dim R + 2 codim R + PAIRING_EXTRA_BOUND

    # Oracle and randomized suites
    ORACLE_DEGREE_BOUND: int = 8
    RANDOM_SEED: int = 0
    RANDOM_MODULES_PER_RING: int = 200

    # Corpus
    CORPUS_DIR: Path = PACKAGE_DIR / "corpus"
    CORPUS_WORKERS: int = 1

    # Caches
    GB_CACHE_SIZE: int = 4096
    RESOLUTION_CACHE_SIZE: int = 512  # minimal resolutions kept, least recently used evicted first

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_DIR: Path = PACKAGE_DIR.parent.parent / "logs"


settings = Settings()


def resolution_bound(dim: int, bound: Optional[int] = None) -> int:
    """Default homological bound for resolutions over a ring of dimension `dim`."""
    if bound is not None:
        return bound
    if settings.DEFAULT_BOUND is not None:
        return settings.DEFAULT_BOUND
    return dim + settings.EXTRA_BOUND


def pairing_bound(dim: int, codim: int, bound: Optional[int] = None) -> int:
    """Default bound for theta/eta: dim R + 2 codim R + PAIRING_EXTRA_BOUND."""
    if bound is not None:
        return bound
    if settings.DEFAULT_BOUND is not None:
        return settings.DEFAULT_BOUND
    return dim + 2 * codim + settings.PAIRING_EXTRA_BOUND
