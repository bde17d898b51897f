"""CLI commands for sa-forge."""
