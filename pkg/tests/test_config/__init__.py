"""Configuration tests for sa-forge."""
