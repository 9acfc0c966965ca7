"""
CLI commands for dirilab.
"""
