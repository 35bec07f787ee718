"""Support-constrained MDS generator matrices and their combinatorics.

The package builds [n, m] generator matrices over GF(q) whose zero
pattern follows a prescribed binary support matrix, going through the
generalized Reed-Solomon transformation, and verifies the combinatorial
machinery behind that construction (vanishing coefficient determinants,
rectangular properties, the degree-reduction process) by exact symbolic
computation and exhaustive or seeded randomized search at desk scale.
"""

from .fields import (FieldElem, FieldMatrix, FieldSpec, NonSquare, NotPrimePower,
                     det, invertible, make_field)
from .polyring import (DegreeTooHigh, MissingAssignment, MultiPoly, RootPoly,
                       SizeMismatch, coeff_matrix_det,
                       coeff_matrix_det_zero_randomized, derivative, evaluate,
                       hasse_derivative, is_identically_zero, probably_zero,
                       root_poly)
from .structures import (DegreesNotUniform, ParseError, RSSubset, RectWitness,
                         RootFamily, SupportMatrix, all_rs_subsets, has_grp,
                         has_rp, higher_order, mds_condition, root_polys,
                         to_root_family)
from .reduction import (NotAcceptable, ReductionRound, ReductionTrace, StuckGRP,
                        check_reduction_identity, reduce_all, reduce_family,
                        removable_elements, strongly_reducible_subsets,
                        weakly_reducible)
from .codegen import (CodeInstance, FieldTooSmall, MinorReport, NotFound,
                      NotMDSCondition, build_code, find_points, transformation,
                      vandermonde, verify_mds)
from .verify import (COUNTEREXAMPLE, NONZERO_GNRP, NONZERO_GRP, ZERO_GRP,
                     SuiteScope, VerifyReport, all_profiles, canonical_key,
                     check_mds_rp_equivalence, check_reduction_properties,
                     classify_family, enumerate_families, run_suite)

__version__ = "0.1.0"
