"""Geometry and group structure of Poisson rate-distortion problems."""

__version__ = "0.1.0"
