"""Configuration management for QCIRS."""

import os
from pathlib import Path
from pydantic_settings import BaseSettings
from dotenv import load_dotenv

load_dotenv()

# Shipped corpus of verified codes
DEFAULT_CORPUS = Path(__file__).resolve().parent.parent / "data" / "irs_corpus.jsonl"


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Corpus Configuration
    corpus_path: str = os.getenv("QCIRS_CORPUS", str(DEFAULT_CORPUS))

    # Search Configuration
    workers: int = int(os.getenv("QCIRS_WORKERS", "1"))  # 1 = sequential
    budget_seconds: float = float(os.getenv("QCIRS_BUDGET_SECONDS", "0"))  # 0 = no budget
    oracle_max_n: int = int(os.getenv("QCIRS_ORACLE_MAX_N", "500"))

    # Numerics
    chunk_elements: int = int(os.getenv("QCIRS_CHUNK_ELEMENTS", "4000000"))

    # Sieve map rendering
    sieve_width: int = int(os.getenv("QCIRS_SIEVE_WIDTH", "100"))

    # Logging Configuration
    log_level: str = os.getenv("LOG_LEVEL", "INFO")

    class Config:
        env_file = ".env"
        case_sensitive = False
        extra = "ignore"


# Global settings instance
settings = Settings()
