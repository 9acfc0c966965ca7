"""Data models for CLI."""

__all__ = []

