"""Numerical toolkit for symmetric consecutive collision orbits in the planar
circular restricted three-body problem."""

__version__ = "0.1.0"
