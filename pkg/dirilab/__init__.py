"""
dirilab: a laboratory for Dirichlet non-improvable sets.

Exact continued-fraction tools, Cantor subset constructions, pressure and
measure computations, and empirical dimension estimators behind one CLI.
"""

__version__ = "0.1.0"
__author__ = "dirilab Contributors"
__license__ = "MIT"

from dirilab.cli.main import cli

__all__ = ["cli", "__version__"]
