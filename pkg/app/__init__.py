"""
Ridge Bench - ridge-parameter estimators, theoretical MSE and a Monte Carlo harness.

This package estimates the ridge shrinkage parameter k with sixteen rules,
evaluates the canonical-form MSE formulas, reproduces the real-data tables for
the Gruber and Portland cement datasets and runs the simulation grid behind the
AMSE tables.
"""

__version__ = "1.0.0"
