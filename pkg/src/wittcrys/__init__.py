"""wittcrys: exact arithmetic for truncated Witt vectors, cycle-type modules,
Frobenius-linear (Artin-Schreier) systems, and slope/valuation calculus."""

from .errors import (BadR, BadShape, FieldTooSmall, IncompatibleFields,
                     InconsistentInput, MismatchedStructure, NotACycle,
                     NotPrime, NotSingular, OracleMismatch, RankDeficientLie,
                     ReducibleModulus, UsageError, WittcrysError)
from .fields import FFElement, FieldDesc, embed, frobenius, make_field
from .witt import (PRECISION_CAP, WittStructure, WittVector, sigma, sigma_inv,
                   teichmuller, verschiebung, witt_add, witt_from_int,
                   witt_mul, witt_neg, witt_one, witt_p_power, witt_structure,
                   witt_zero)
from .crystal import (CycleType, Polygon, StdModule, has_slopes_0_and_1,
                      hodge_polygon, newton_above_hodge, newton_polygon,
                      slope_decomposition, standard_module,
                      verify_lattice_axioms)
from .artin_schreier import (ASSystem, RecoverMap, SolutionSet, as_system,
                             boundary_test, eliminate_variable,
                             geometric_count, moore_determinant, solve_over)
from .valuations import (Example43Report, RationalFn, ValuationProfile,
                         cycle_Q, example_43_family, example_43_report,
                         lubin_tate_w, solution_orbit_exponents,
                         sum_identity_check, valuation_profile)
from .embedding import (EmbeddingParameters, EmbeddingPlan, EmbeddingReport,
                        PatternClass, build_embedding, embedding_parameters,
                        lubin_tate_module, verify_embedding)
from .connection import (ConnectionInput, LieBasis, LinearRecovery,
                         compile_system, connection_input, lie_basis,
                         reduce_by_lie_constraints, variable_index)

__version__ = "0.1.0"
