from pydantic_settings import BaseSettings, SettingsConfigDict
from pathlib import Path


class Settings(BaseSettings):
    # Application settings
    PROJECT_NAME: str = "Ridge Bench"
    VERSION: str = "1.0.0"
    LOG_LEVEL: str = "INFO"
    DEBUG: bool = False

    # Application Paths
    BASE_DIR: Path = Path(__file__).parent.parent
    DATA_DIR: Path = Path(__file__).parent / "data"
    OUTPUT_DIR: Path = BASE_DIR / "results"

    # Simulation settings
    DEFAULT_SEED: int = 20240101
    DEFAULT_REPLICATIONS: int = 5000
    WORKERS: int = 1

    # Eigensolver settings
    JACOBI_MAX_SWEEPS: int = 50
    JACOBI_TOLERANCE: float = 1e-12

    # Output settings
    TABLE_DECIMALS: int = 4

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra="ignore")


settings = Settings()
