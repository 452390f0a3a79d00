"""Degree-bounded polynomial hulls of compact sets in C and C^2.

The d-hull of K collects the points w with |P(w)| <= sup_K |P| for every
polynomial P of degree at most d. Two oracles decide membership: an exact
alignment test for n+1 points at degree n, and a minimax linear program on
sampled sets that also returns separating certificates.
"""

__version__ = "0.1.0"

from .verdict import BORDERLINE, MEMBER, NON_MEMBER, MembershipVerdict
from .poly import Poly1, Poly2, eval1, eval2, monomial_basis, sup_norm
from .sets import SampledSet, arc_set, circle_set, finite_set, finite_set2, resample, sample
from .exact import PointConfiguration, hull_point_search, membership_exact
from .cheb import (MonicConstraint, PointConstraint, grid_hull, membership_numeric, minimax,
                   verify_certificate)

__all__ = [
    "BORDERLINE", "MEMBER", "NON_MEMBER", "MembershipVerdict",
    "Poly1", "Poly2", "eval1", "eval2", "monomial_basis", "sup_norm",
    "SampledSet", "arc_set", "circle_set", "finite_set", "finite_set2", "resample", "sample",
    "PointConfiguration", "hull_point_search", "membership_exact",
    "MonicConstraint", "PointConstraint", "grid_hull", "membership_numeric", "minimax", "verify_certificate",
]
