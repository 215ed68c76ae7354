"""
Configuration settings for ECFCensus
"""
from typing import Optional
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings loaded from environment variables"""

    # Logging
    log_level: str = "INFO"
    log_file: Optional[str] = None

    # Parallelism
    default_threads: int = 1
    census_block_size: int = 2048
    census_batch_pairs: int = 1 << 20

    # Census tolerances
    census_tolerance_c: float = 10.0
    census_min_check_n: int = 1000

    # Totient sums
    totient_exact_limit: int = 2000
    totient_calibration: float = 3.0  # times the max normalized error up to totient_calibration_n
    totient_calibration_n: int = 100000
    totient_regime_min: int = 1000

    # Congruence pair counting
    kloosterman_exponent: float = 0.55
    kloosterman_naive_limit: int = 200
    kloosterman_error_bound: float = 10.0

    # Pell oracles
    pell_bruteforce_limit: int = 10 ** 6
    pell_rcf_fallback: bool = True

    # Output
    json_schema_version: str = "1.0"

    class Config:
        env_file = ".env"
        case_sensitive = False


# Global settings instance
settings = Settings()
