"""Decomposability of simplicial complexes and the Delta(a, b) family."""

__version__ = "0.1.0"

from .complex import (
    RankResult,
    SimplicialComplex,
    deletion,
    f_count,
    link,
    make_complex,
    rank_of,
)
from .decomposability import (
    SearchVerdict,
    SheddingCertificate,
    find_strong_decomposition,
    find_weak_decomposition,
    verify_certificate,
)
from .delta import DeltaLabeling, cross_validate, delta_complex, delta_margins
from .diameter import bound_report, diameter, facet_ridge_graph
from .obstruction import (
    audit_phi_prefix_tree,
    audit_phi_properties,
    audit_sequence_against_theorem,
    minimal_empty_intersection,
    phi,
    tight_family,
)
from .transportation import Margins, enumerate_vertices, polar_boundary_complex

__all__ = [
    "DeltaLabeling",
    "Margins",
    "RankResult",
    "SearchVerdict",
    "SheddingCertificate",
    "SimplicialComplex",
    "audit_phi_prefix_tree",
    "audit_phi_properties",
    "audit_sequence_against_theorem",
    "bound_report",
    "cross_validate",
    "deletion",
    "delta_complex",
    "delta_margins",
    "diameter",
    "enumerate_vertices",
    "f_count",
    "facet_ridge_graph",
    "find_strong_decomposition",
    "find_weak_decomposition",
    "link",
    "make_complex",
    "minimal_empty_intersection",
    "phi",
    "polar_boundary_complex",
    "rank_of",
    "tight_family",
    "verify_certificate",
]
