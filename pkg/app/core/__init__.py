"""
Numerical core of Ridge Bench: random streams, linear algebra, canonical
regression, ridge-parameter estimators, the simulation engine, the real-data
pipeline and result writers.
"""
