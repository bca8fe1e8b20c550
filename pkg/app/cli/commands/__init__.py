"""
Commands of the Ridge Bench CLI.

Each module exposes one click command registered on the group in app.main.
"""

from . import fit, realdata, simulate

__all__ = ['fit', 'realdata', 'simulate']
