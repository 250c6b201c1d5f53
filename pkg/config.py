import os
import logging
from dotenv import load_dotenv
from typing import Optional

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)


class Config:
    """Centralized configuration read from the environment."""

    # --- Worker Configuration ---
    THREADS: int = int(os.getenv("RATIOLAB_THREADS", "1"))
    SEGMENT_SIZE: int = int(os.getenv("RATIOLAB_SEGMENT_SIZE", str(2**22)))

    # --- Oracle Configuration ---
    ORACLE_LIMIT: int = int(os.getenv("RATIOLAB_ORACLE_LIMIT", str(10**7)))

    # --- Logging Configuration ---
    LOG_LEVEL: str = os.getenv("RATIOLAB_LOG_LEVEL", "INFO")
    LOG_FILE: Optional[str] = os.getenv("RATIOLAB_LOG_FILE")

    # --- Report Settings ---
    FORMAT: str = os.getenv("RATIOLAB_FORMAT", "csv").lower()

    @classmethod
    def validate(cls) -> bool:
        """Validate critical configuration values."""
        errors = []

        if cls.THREADS < 1:
            errors.append("RATIOLAB_THREADS must be at least 1")

        if cls.SEGMENT_SIZE < 1:
            errors.append("RATIOLAB_SEGMENT_SIZE must be at least 1")

        if cls.ORACLE_LIMIT < 2:
            errors.append("RATIOLAB_ORACLE_LIMIT must be at least 2")

        if cls.FORMAT not in ("csv", "json"):
            errors.append("RATIOLAB_FORMAT must be 'csv' or 'json'")

        if not hasattr(logging, cls.LOG_LEVEL.upper()):
            errors.append(f"RATIOLAB_LOG_LEVEL {cls.LOG_LEVEL!r} is not a logging level")

        if errors:
            for error in errors:
                logger.error(f"Configuration error: {error}")
            return False

        return True


# Initialize configuration
config = Config()

# Validate configuration on import
if not config.validate():
    raise ValueError(
        "Configuration validation failed! Please check your RATIOLAB_* environment variables."
    )
