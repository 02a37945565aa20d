"""t2geom: calculus and verification on second-order tangent bundles.

The chart of T2M has coordinates (x, y, z) = position, velocity,
acceleration, each block of size n.  The package provides the canonical
tensors and fields, Frolicher-Nijenhuis brackets and graded derivations,
nonlinear connections of types 1 and 2 with their torsions and
decompositions, linear connections with their induced nonlinear
connections, Finslerian 2-forms with their canonical spray and
connections, and a scenario-driven verification CLI.
"""

from .fields import Chart, ScalarPForm, VectorField, VectorOneForm, VectorTwoForm, evaluate
from .calculus import (apply_vector2form, d_K, exterior_derivative,
                       fn_bracket_ff, fn_bracket_fv, fn_bracket_vf, interior_product,
                       lie_bracket)
from .canonical import (CanonicalPack, SemiSpray, canonical_pack, is_homogeneous,
                        is_semibasic, is_spray, make_semispray, verify_identity_suite)
from .connections import (Connection, associated_semispray, catz_decompose_type2,
                          conjugate_pair, decompose_type1, projectors,
                          reference_semispray, strong_torsion,
                          strong_torsion_closed_form, validate_connection,
                          weak_torsion)
from .linear import (LinearConnection, covariant_derivative, dc_matrix,
                     fiber_maps, homogeneity_criterion, induced_connection,
                     is_regular, prop3_obstruction, prop4_relation)
from .finsler import (FinslerianForm, canonical_connections, canonical_spray,
                      decompose_omega, energy, finsler_witness,
                      homogeneous_exactness, induced_metric, validate_finslerian)
from .scenarios import Scenario, list_scenarios, load_definition, run_scenario
from .report import Check, VerificationReport

__all__ = [
    "Chart", "ScalarPForm", "VectorField", "VectorOneForm", "VectorTwoForm",
    "evaluate", "lie_bracket", "fn_bracket_vf", "fn_bracket_fv", "fn_bracket_ff",
    "exterior_derivative", "interior_product", "d_K", "apply_vector2form",
    "CanonicalPack", "SemiSpray", "canonical_pack", "make_semispray", "is_spray",
    "is_homogeneous", "is_semibasic", "verify_identity_suite",
    "Connection", "validate_connection", "projectors", "reference_semispray",
    "associated_semispray", "weak_torsion", "strong_torsion",
    "strong_torsion_closed_form", "decompose_type1", "catz_decompose_type2",
    "conjugate_pair",
    "LinearConnection", "covariant_derivative", "dc_matrix", "fiber_maps",
    "is_regular", "induced_connection", "homogeneity_criterion",
    "prop3_obstruction", "prop4_relation",
    "FinslerianForm", "validate_finslerian", "induced_metric", "energy",
    "homogeneous_exactness", "canonical_spray", "decompose_omega",
    "canonical_connections", "finsler_witness",
    "Scenario", "run_scenario", "list_scenarios", "load_definition",
    "Check", "VerificationReport",
]

__version__ = "0.1.0"
