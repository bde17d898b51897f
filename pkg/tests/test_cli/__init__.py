"""CLI tests for sa-forge."""
