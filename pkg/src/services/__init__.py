"""Configuration text, file formats and pipeline orchestration."""
