"""Exact lattice polytope toolkit: hulls, lattice points, duality, normal
forms, Hodge data, Landau-Ginzburg spectra, fibrations and classification."""

from .core import (
    ArithmeticOverflow,
    CapacityError,
    ConsistencyError,
    HyperplaneEq,
    LatpolyError,
    ReflexivityError,
    SpanError,
    eval_eq,
    get_limits,
    limits,
    pairing_matrix,
)
from .faces import ReflexivePair, face_lattice, hodge
from .hull import complete_points, dual_poly, find_hull, ip_check, is_reflexive, span_check
from .normalform import normal_form, symmetry_counts, triangular_form
from .textio import CWS, QuotientAction, WeightSystem, cws_to_points, parse_cws

__version__ = "0.1.0"
