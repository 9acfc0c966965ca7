"""
Entry point for running dirilab as a module: python -m dirilab
"""

from dirilab.cli.main import main

if __name__ == "__main__":
    main()
