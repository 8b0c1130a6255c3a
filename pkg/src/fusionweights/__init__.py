"""Exact group-theoretic verification engine.

Builds finite groups declaratively, computes exact character tables, and
verifies integer counting identities (defect-zero counts, weight sums,
orbit-pair bijections) for two families of fusion-system data over
finite torus towers.
"""

ENGINE_VERSION = "0.1.0"

__version__ = ENGINE_VERSION
