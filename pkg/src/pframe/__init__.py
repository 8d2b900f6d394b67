"""Certification and discovery tools for p-frame energies on spheres and projective spaces."""

__version__ = "0.1.0"
