"""Utilities for sa-forge."""
