"""Exact combinatorics of symmetric-space embeddings.

ı-root data and their spherical lattices, submonoids of the dominant
spherical lattice with their closed prime ideals, enveloping monoids and
canonical embeddings.
"""
from .catalog import get, list_names
from .cones import Cone, dual_description, faces, from_inequalities, hilbert_basis
from .embeddings import (
    abelianization, canonical_embedding, cross_check, enveloping_monoid, essential,
    essential_pairs, is_very_flat, preceq, validate_embedding, valuation_cone,
)
from .errors import SymembedError, ValidationError
from .monoids import (
    SphericalMonoid, closed_prime_ideals, closure, is_closed, is_saturated, member, orbit_poset,
)
from .root_datum import RootDatum, Weight, classify_type, dominance_leq
from .satake import SatakeData, bar, build_iroot_datum, decompose_difference, doubled, spherical_lattice

__version__ = "0.1.0"
