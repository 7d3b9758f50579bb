"""
qsle: geometric measures of multipartite entanglement read as times.

``E_m`` of a pure state is one minus the squared overlap with the closest
m-separable state.  Under the time-optimal Hamiltonian of energy gap
``2 hbar omega`` that state is reached in ``arcsin(sqrt(E_m)) / omega``.
"""
from .errors import (ConsistencyError, DegenerateContractionError, DegeneratePairError,
                     DomainError, OracleScaleError, QSLEError, ShapeError, StateFileError)
from .states import (Partition, ProductState, PureState, assemble, basis_state, bell_state,
                     contract_except, ghz_state, haar_random_state, inner_product,
                     load_state, save_state, schmidt_state, state_from_json, state_to_json,
                     state_with_entanglement, w_state)
from .partitions import enumerate_partitions
from .separable import (OptConfig, OverlapResult, entanglement_hierarchy,
                        geometric_entanglement, max_overlap_for_partition)
from .qsl import (DenseHamiltonian, OptHamiltonian, build_h_opt, evolve_dense, evolve_opt,
                  first_passage_time, orthogonal_complement, phase_align, qsl_bound,
                  transit_time, variance)
from .enttime import (HBAR, TimeReport, VerificationRecord, energy_gap,
                      entanglement_from_time, figure_data, tau_m, time_from_entanglement,
                      verify_separabilization)
from .oracle import brute_force_overlap, oracle_entanglement, schmidt_overlap

__version__ = "0.1.0"
