"""Stability of Cayley graphs on finite abelian groups via Schur rings."""

from .autsearch import automorphism_search, find_isomorphism
from .cayley import Graph, build_cayley, canonical_double_cover, double_cover, make_connection_set
from .groups import AbelianGroup, Subgroup, make_group, parse_group
from .isotest import brute_force_iso, muzychuk_iso
from .keys import PrimaryKey, key_of_set, key_partition, multipliers_for_key, phi_map
from .permgroup import PermGroup
from .poschel import SSystem, brute_force_srings, build_ssystem_partition, enumerate_ssystems
from .sring import SRing, make_sring, transitivity_module, verify_sring
from .stability import analyze, audit_theorems, brute_stability, criterion_2pe, sring_witness

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup", "Graph", "PermGroup", "PrimaryKey", "SRing", "SSystem", "Subgroup",
    "analyze", "audit_theorems", "automorphism_search", "brute_force_iso", "brute_force_srings",
    "brute_stability", "build_cayley", "build_ssystem_partition", "canonical_double_cover",
    "criterion_2pe", "double_cover", "enumerate_ssystems", "find_isomorphism", "key_of_set",
    "key_partition", "make_connection_set", "make_group", "make_sring", "multipliers_for_key",
    "muzychuk_iso", "parse_group", "phi_map", "sring_witness", "transitivity_module", "verify_sring",
]
