"""Polyhedral-cone models of general probabilistic theories.

Builds local systems as dual pairs of polyhedral cones, composes them
under the max tensor product, and provides decision procedures for the
structure of their reversible dynamics: triviality certificates,
dichotomy and reducibility tests, exhaustive enumeration of reversible
transformations at small scale, a conditional-CNOT construction on
reducible systems, and an orthogonal-frame analysis of odd polygons.
"""

from .composite import (CompositeState, CompositeSystem, ProductEffect,
                        behavior_table, chsh_value, compose,
                        hamming_distance, is_nonsignaling, is_separable,
                        marginalize, pr_box_analogue, pure_product_states,
                        refiners_of_subunit, state_polytope_vertices,
                        sub_unit_effects)
from .cones import Cone, cone_leq, dual_cone, extreme_rays
from .dynamics import (SearchConfig, Transformation, TrivialityCertificate,
                       build_conditional_cnot, enumerate_reversibles,
                       entanglement_audit, gtrit_flip_symmetry,
                       is_adjacency_preserving, is_allowed_reversible,
                       subunit_criterion, triviality_certificate,
                       trivial_group_order, two_term_decompositions,
                       verify_theorem1)
from .polygon import (InnerProductClasses, PolygonFrame,
                      frame_identity_check, inner_product_classes,
                      odd_polygon_triviality_check, opposite_pair_witness,
                      orthogonality_check, polygon_frame, relation)
from .reports import AnalysisReport, TOOL_VERSION
from .systems import (LocalSystem, build_classical, build_cube,
                      build_octoplex, build_polygon, build_squashed_gtrit,
                      fine_grained_measurements, is_classical,
                      is_dichotomic, reduce, validate_system)

__version__ = TOOL_VERSION

__all__ = [
    "AnalysisReport", "CompositeState", "CompositeSystem", "Cone",
    "InnerProductClasses", "LocalSystem", "PolygonFrame", "ProductEffect",
    "SearchConfig", "TOOL_VERSION", "Transformation",
    "TrivialityCertificate", "behavior_table", "build_classical",
    "build_conditional_cnot", "build_cube", "build_octoplex",
    "build_polygon", "build_squashed_gtrit", "chsh_value", "compose",
    "cone_leq", "dual_cone", "enumerate_reversibles",
    "entanglement_audit", "extreme_rays", "fine_grained_measurements",
    "frame_identity_check", "gtrit_flip_symmetry", "hamming_distance",
    "inner_product_classes", "is_adjacency_preserving",
    "is_allowed_reversible", "is_classical", "is_dichotomic",
    "is_nonsignaling", "is_separable", "marginalize",
    "odd_polygon_triviality_check", "opposite_pair_witness",
    "orthogonality_check", "polygon_frame", "pr_box_analogue",
    "pure_product_states", "reduce", "refiners_of_subunit", "relation",
    "state_polytope_vertices", "sub_unit_effects", "subunit_criterion",
    "triviality_certificate", "trivial_group_order",
    "two_term_decompositions", "validate_system", "verify_theorem1",
]
