"""
Command-line surface of Ridge Bench.

This package contains the click group and one module per command.
"""

from .commands import fit, realdata, simulate

__all__ = ['fit', 'realdata', 'simulate']
