"""Rigidity and radical-solvability toolkit for 2D bar-joint frameworks."""
__version__ = "0.1.0"
