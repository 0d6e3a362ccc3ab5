"""Classical and quantum values of XOR games under limited one-way
communication: solvers, the Bell-functional lift, the Rademacher game
family, and l1 input reduction."""

from .games import (BellFunctional, ClassicalOwStrategy, CorrelationMatrix,
                    DegenerateGameError, GameError, GuardExceededError,
                    XorGame, chsh, evaluate_correlation, game_from_file,
                    game_from_json, make_xor_game, normalize_coefficients,
                    sign_pm)
from .linalg import (HermitianEig, QuantumOwStrategy, hermitian_eig,
                     operator_norm, pos_neg_split, sign_operator, trace_norm)
from .solvers import (SolveReport, VectorStrategy, bell_classical_value_exact,
                      classical_value_exact, distributional_complexity_ow,
                      ow_classical_value_exact, ow_classical_value_local,
                      ow_quantum_value_seesaw, quantum_value_seesaw)
from .family import (FamilyGame, FamilySizeError, alice_embedding,
                     build_family_game, compute_M,
                     family_quantum_strategy, khintchine_empirical,
                     khintchine_upper_bound, latala_estimate, m_bounds,
                     selfadjoint_split)
from .lift import (LiftedStrategy, WeylSet, build_lifted_functional,
                   evaluate_bell, teleportation_strategy, weyl_unitaries)
from .reduction import (DistortionReport, ReductionMap, l1_block_norm,
                        identity_reduction_map, reduce_game,
                        sample_reduction_map, subspace_embeddings,
                        verify_isomorphism)

__version__ = "0.1.0"
