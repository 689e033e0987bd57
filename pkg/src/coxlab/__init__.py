"""coxlab: exact chamber-level computations for Coxeter systems."""

from .algebraic import (AlgebraicReal, FieldSpec, SIGN_STATS, field_for)
from .errors import (BudgetError, ConsistencyError, CoxlabError, FieldError,
                     InputError, PreconditionError)
from .matrices import (CoxeterMatrix, DiagramComponent, INFINITY, Nerve,
                       components, has_finite_index_standard, is_finite,
                       is_indecomposable, nerve, parse_matrix)
from .words import (CoxeterGroup, Element, RootVector, Wall, root_span_rank,
                    word_from_text)
from .davis import (AngleSite, ChamberPolytope, angle_sites, check_andreev,
                    check_stacan, convex_hull, census_record,
                    decomposed_angles, enumerate_convex_polytopes,
                    facets_intersect, is_acute_angled, is_convex,
                    is_coxeter_polytope, side, stacan_pairs,
                    verify_facet_bound, walls_intersect)
from .subgroups import (ReflectionSubgroup, analyze, canonical_generators,
                        comm_condition, contains_reflection,
                        contains_reflection_checked, fundamental_polytope,
                        index_two_by_commutation, induced_matrix,
                        nerve_deletion_check, search_equal_rank_subgroups,
                        subgroup_report, verify_rank_theorem)

__version__ = "0.1.0"
