from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""

    # Logging Configuration
    LOG_LEVEL: str = "WARNING"
    LOG_DIR: str = "logs"
    LOG_TO_FILE: bool = False
    LOG_JSON: bool = False

    # Number Theory Configuration
    MAX_MODULUS: int = 2**63 - 1
    SIEVE_LIMIT_CAP: int = 10_000_000
    FULL_DIVISOR_SUMS: bool = False  # debug: sum over every divisor, not only squarefree ones

    # Counting Configuration
    MEET_CAP: int = 20  # the meet sums have 2^#meet - 1 outer terms
    DEFAULT_MEET_MODE: str = "inclusion-exclusion"

    # Oracle Configuration
    ORACLE_CAP: int = 24
    ORACLE_PARTITION_BITS: int = 16
    WITNESS_LIMIT: int = 5

    # CLI Configuration
    TABLE_MAX_ROWS: int = 100_000
    CHECK_WORKERS: int = 1
    CHECK_MAX_M: int = 12
    CHECK_MAX_N: int = 20
    CHECK_SAMPLES: int = 200
    DEFAULT_SEED: int = 0
    BENCH_REPETITIONS: int = 5

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra="ignore")


# Create settings instance
settings = Settings()
