"""
Computational engine: continued fractions, Cantor constructions, pressure roots,
measures and dimension estimators. Everything here is importable without the CLI.
"""
