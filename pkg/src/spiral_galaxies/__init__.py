"""Spiral Galaxies puzzles: verification, exact solving, hardness reductions and design."""

__version__ = "0.1.0"
