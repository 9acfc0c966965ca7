"""Command-line interface for dirilab."""

__all__ = []
