"""Exact quaternion-trick construction on lattice models of polarized abelian varieties."""
