"""Corpus serialization and report models."""
