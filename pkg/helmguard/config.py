import logging
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    # Application Settings
    APP_NAME: str = "HelmGuard"
    VERSION: str = "1.0.0"

    # Logging Settings
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Output Settings
    OUTPUT_DIR: str = "out"
    CSV_FLOAT_FORMAT: str = "%.9g"  # 9 significant digits

    # Numerical guards
    BREAKDOWN_THRESHOLD: float = 1e9
    SINGULAR_TOL: float = 1e-9
    SP1_GUARD_COS: float = 0.03  # |cos(psi_l - psi_b)| below this makes the surge stabilizer singular
    CC1_DEGENERATE_TOL: float = 1e-6  # |sin(psi_l - psi_b)| below this drops the CC-1 row
    QP_FEASIBILITY_TOL: float = 1e-10
    QP_ACTIVE_TOL: float = 1e-6

    # Event detection
    SURGE_EVENT_MARGIN: float = 0.1  # m/s above eps_u
    SMALL_PE_EVENT: float = 1.0  # m
    EVENT_WINDOW: float = 5.0  # s
    STEADY_WINDOW: float = 100.0  # s at the end of a completed run

    model_config = SettingsConfigDict(case_sensitive=True, env_file=".env", extra="ignore")


# Create settings instance
settings = Settings()


def configure_logging() -> None:
    """Apply the configured log level and format to the root logger"""
    logging.basicConfig(level=settings.LOG_LEVEL, format=settings.LOG_FORMAT)
