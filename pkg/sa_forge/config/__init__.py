"""Configuration management for sa-forge."""
