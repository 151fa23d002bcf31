"""
Nuclear Hamiltonians and their time evolution.
"""

from .dynamics import (
    IntegratorConfig,
    LeakageReport,
    Propagator,
    StateVector,
    analytic_ner_propagator,
    analytic_single_propagator,
    as_state_vector,
    basis_state,
    evolve,
    evolve_trajectory,
    expm_hermitian,
    factored_unitary,
    leakage,
    max_deviation_up_to_phase,
    propagator,
    restrict_two_qubit,
    rotating_frame,
    rotating_generator,
    rotation_matrix,
    to_lab_frame,
    two_qubit_propagator_factored,
    unitarity_residue,
)
from .hamiltonians import (
    DriveParams,
    HamiltonianModel,
    JSchedule,
    NucleusParams,
    TwoQubitParams,
    h_lqse,
    h_ner,
    h_quadrupole,
    h_single,
    h_total,
    h_two,
    resonance_omega_single,
    rotating_frame_model,
    subspace_drive_strength,
    two_qubit_model,
)

__all__ = [
    "NucleusParams",
    "DriveParams",
    "HamiltonianModel",
    "JSchedule",
    "TwoQubitParams",
    "h_quadrupole",
    "h_total",
    "h_lqse",
    "h_ner",
    "h_single",
    "h_two",
    "resonance_omega_single",
    "subspace_drive_strength",
    "rotating_frame_model",
    "two_qubit_model",
    "StateVector",
    "Propagator",
    "IntegratorConfig",
    "LeakageReport",
    "as_state_vector",
    "basis_state",
    "expm_hermitian",
    "unitarity_residue",
    "evolve",
    "evolve_trajectory",
    "propagator",
    "rotating_frame",
    "to_lab_frame",
    "rotating_generator",
    "analytic_ner_propagator",
    "analytic_single_propagator",
    "rotation_matrix",
    "leakage",
    "two_qubit_propagator_factored",
    "factored_unitary",
    "restrict_two_qubit",
    "max_deviation_up_to_phase",
]
