"""Test package for sa-forge."""
