"""Exact workbench for Kazhdan-Laumon algebras at the Grothendieck-group level.

The package verifies, by exact computation over Z[v, v^-1], the structure
of the algebra KL(v) attached to a finite Weyl group: its monodromic Hecke
projections, Kazhdan-Lusztig cells and full-twist spectra, the glued
K-group model with its canonical-complex Euler identity, and the
localization argument at p(v) = prod (1 - v^2i).
"""

__version__ = "0.1.0"
