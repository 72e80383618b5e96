"""Settings defaults."""

from src.config import DEFAULT_CORPUS, Settings, settings


def test_default_corpus_exists():
    assert DEFAULT_CORPUS.name == "irs_corpus.jsonl"
    assert DEFAULT_CORPUS.exists()


def test_defaults_are_sane():
    assert settings.workers >= 1
    assert settings.oracle_max_n >= 1
    assert settings.sieve_width >= 1
    assert settings.chunk_elements > 0


def test_explicit_values_override():
    custom = Settings(workers=3, budget_seconds=1.5, log_level="DEBUG")
    assert custom.workers == 3
    assert custom.budget_seconds == 1.5
    assert custom.log_level == "DEBUG"
