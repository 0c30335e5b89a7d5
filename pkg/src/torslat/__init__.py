"""Torsion-class lattices, two-term silting complexes, and compatible
spectra over finite-dimensional path algebras."""

__version__ = "0.1.0"
