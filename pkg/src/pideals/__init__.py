"""Exact computations with analytic P-ideals presented by lsc submeasures."""
from .core import (AxiomReport, FiniteSupportMeasure, MembershipVerdict, Submeasure,
                   TailMatrix, check_axioms, eval_on_finite, exh_verdict,
                   exhaustive_axiom_check, fin_verdict, sup_of_measures,
                   symmetric_difference_metric, tail_matrix, tallness_diagnostic)
from .errors import BudgetExceeded, SpecError
from .rational import Q, fmt
from .sets import SetSpec, set_from_dict
from .tree import LeafMask, TreeNode, leaf_mask, minimal_antichain
from .zoo import (density_submeasure, empty_otimes_fin_submeasure, farah_submeasure,
                  generalized_density_submeasure, intersection_profile, summable_submeasure,
                  trace_null_submeasure, tree_density_submeasure, tree_summable_submeasure)
from .series import (Vector, VectorSequence, absolute_value_sequence,
                     bounded_columns_to_gdensity, c0_normal_form, cauchy_modulus,
                     column_finiteness_check, dual_witness, ellinf_representation,
                     induced_submeasure, nonpathological_envelope, partial_sum)
from .rademacher import (BlockLayout, a_x_projection, jr_submeasure, khintchine_check,
                         rademacher_vector, x_sequence)
from .witness import (FamilySpec, WitnessFamily, bm_sets, covering_sample_check,
                      density_like_search, heavy_branch_search, phi_family,
                      summable_like_check, trace_null_witness_family)

__version__ = "0.1.0"
