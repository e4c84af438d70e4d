from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field, field_validator
import logging
import sys
import os
from pathlib import Path
from typing import Optional
from .exceptions import ConfigurationError


VALID_BACKENDS = ["auto", "scalar", "w16", "w32", "w64"]
VALID_SEQ_PARAM_SOURCES = ["published", "tuned"]


class Settings(BaseSettings):
    # Logging Settings
    log_level: str = Field("INFO", description="Logging level")
    log_file: Optional[str] = Field(None, description="Optional log file path")

    # Chunking Settings
    default_backend: str = Field(
        "auto", description="SeqCDC backend: auto, scalar, w16, w32 or w64"
    )
    seq_param_source: str = Field(
        "published",
        description="SeqCDC defaults for experiments: published table or tuner-chosen",
    )
    histogram_bins: int = Field(
        32, description="Number of chunk-length histogram buckets", ge=1
    )

    # Throughput Settings
    throughput_runs: int = Field(5, description="Timed runs per measurement", ge=1)

    # Paths
    output_dir: str = Field("./reports", description="Directory for run reports")
    corpus_dir: str = Field("./corpora", description="Directory for generated corpora")

    # Tuner Settings
    tuner_min_sample_bytes: int = Field(
        64 * 1024 * 1024,
        description="Smallest random sample the tuner accepts",
        ge=0,
    )
    tuner_segment_bytes: int = Field(
        8 * 1024 * 1024,
        description="Random data is simulated in independent segments of this size",
        ge=4096,
    )
    tuner_tolerance: float = Field(
        0.10, description="Relative tolerance for the chosen candidate", gt=0.0
    )
    tuner_error_tolerance: float = Field(
        0.25, description="Search fails when no candidate is this close", gt=0.0
    )
    tuner_seed: int = Field(0x5EC0CDC, description="Seed for tuner sample data")

    # Parallelism
    dedup_workers: int = Field(1, description="Worker processes for dedup runs", ge=1)
    experiment_workers: int = Field(
        1, description="Worker processes for experiment cells", ge=1
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ConfigurationError(
                f"Invalid log level. Must be one of {valid_levels}"
            )
        return v.upper()

    @field_validator("default_backend")
    @classmethod
    def validate_backend(cls, v):
        if v.lower() not in VALID_BACKENDS:
            raise ConfigurationError(
                f"Invalid backend. Must be one of {VALID_BACKENDS}"
            )
        return v.lower()

    @field_validator("seq_param_source")
    @classmethod
    def validate_seq_param_source(cls, v):
        if v.lower() not in VALID_SEQ_PARAM_SOURCES:
            raise ConfigurationError(
                f"Invalid SeqCDC parameter source. Must be one of {VALID_SEQ_PARAM_SOURCES}"
            )
        return v.lower()

    model_config = SettingsConfigDict(
        env_file=os.getenv("ENV_FILE", ".env"),
        env_prefix="CDC_",
        extra="ignore",
    )


settings = Settings()


def setup_logging(level: Optional[str] = None):
    """Configure logging with console and optional file handlers."""
    try:
        level_name = (level or settings.log_level).upper()
        log_level = getattr(logging, level_name)

        # Log to stderr so command output on stdout stays machine-readable
        handlers = [logging.StreamHandler(sys.stderr)]

        if settings.log_file:
            log_path = Path(settings.log_file)
            log_path.parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(log_path))

        logging.basicConfig(
            level=log_level,
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            handlers=handlers,
            force=True,
        )

        logger = logging.getLogger(__name__)
        logger.debug(f"Logging configured with level: {level_name}")
        return logger

    except Exception as e:
        raise ConfigurationError(f"Failed to setup logging: {str(e)}")


logger = setup_logging()
