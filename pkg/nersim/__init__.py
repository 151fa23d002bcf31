"""
Nuclear Electric Resonance Simulator (nersim)
Electric control of high-spin nuclear qubits through the quadrupole interaction.
"""

__version__ = "0.1.0"
__description__ = "Nuclear electric resonance simulator for quadrupolar spin qubits"

from .core.atomic import AtomModel, EfgCoefficients, Orbital, efg_coefficients
from .core.constants import CODATA, PhysicalConstants
from .core.control import (
    CNOT,
    CZ,
    GateSchedule,
    k_rabi,
    number_of_flips,
    pulse_for_rotation,
    score_schedule,
    synthesize_cnot,
    synthesize_cz,
)
from .core.errors import (
    ConfigError,
    IntegratorStiffnessError,
    NerSimError,
    NumericalError,
    OffResonanceError,
    PhysicsDomainError,
    QuadratureError,
)
from .core.physics import (
    DriveParams,
    IntegratorConfig,
    NucleusParams,
    TwoQubitParams,
    evolve,
    h_ner,
    h_single,
    leakage,
)
from .core.spin import SpinQuantum, make_spin_operators

__all__ = [
    "SpinQuantum",
    "make_spin_operators",
    "PhysicalConstants",
    "CODATA",
    "AtomModel",
    "Orbital",
    "EfgCoefficients",
    "efg_coefficients",
    "NucleusParams",
    "DriveParams",
    "TwoQubitParams",
    "IntegratorConfig",
    "h_single",
    "h_ner",
    "evolve",
    "leakage",
    "pulse_for_rotation",
    "synthesize_cz",
    "synthesize_cnot",
    "score_schedule",
    "GateSchedule",
    "CZ",
    "CNOT",
    "k_rabi",
    "number_of_flips",
    "NerSimError",
    "ConfigError",
    "PhysicsDomainError",
    "OffResonanceError",
    "NumericalError",
    "IntegratorStiffnessError",
    "QuadratureError",
]
