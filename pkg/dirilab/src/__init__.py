"""Computational engine, configuration and exports for dirilab."""
