"""pdelaunay core - exact arithmetic, lattices, forms, polytopes and certificates."""

from pdelaunay.core.certify import (
    bruteforce_delaunay,
    cross_minimality_check,
    delaunay_certificate,
    diagram,
    perfection_certificate,
    revalidate_delaunay,
    revalidate_perfection,
    thm7_determinants,
)
from pdelaunay.core.exact_arith import RationalMatrix, determinant, ldlt, rank_and_nullspace
from pdelaunay.core.forms import InhomQuadratic, PairForm, RadialForm, phi_main
from pdelaunay.core.lattice import (
    AffineLattice,
    CanonicalRep,
    ScaledLattice,
    affine_lattice_from_points,
    canonical_rep,
    enumerate_in_ellipsoid,
    enumerate_M,
    odd_class,
)
from pdelaunay.core.polytopes import VertexSet, construct_D, construct_G, construct_P

__all__ = [
    "AffineLattice",
    "CanonicalRep",
    "InhomQuadratic",
    "PairForm",
    "RadialForm",
    "RationalMatrix",
    "ScaledLattice",
    "VertexSet",
    "affine_lattice_from_points",
    "bruteforce_delaunay",
    "canonical_rep",
    "construct_D",
    "construct_G",
    "construct_P",
    "cross_minimality_check",
    "delaunay_certificate",
    "determinant",
    "diagram",
    "enumerate_M",
    "enumerate_in_ellipsoid",
    "ldlt",
    "odd_class",
    "perfection_certificate",
    "phi_main",
    "rank_and_nullspace",
    "revalidate_delaunay",
    "revalidate_perfection",
    "thm7_determinants",
]
