"""Neutral coated inclusions in plane elasticity and conductivity."""

__version__ = "0.1.0"
