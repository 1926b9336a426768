"""Directional rectangle maximal operators and the constructions behind
slope sets of divergence for rectangle differentiation bases."""

__version__ = "0.1.0"
