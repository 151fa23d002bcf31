"""
Gate synthesis and performance figures.
"""

from .gates import (
    CNOT,
    CZ,
    GateFidelityReport,
    GateSchedule,
    GateSegment,
    PulseSpec,
    SegmentKind,
    SimulatedSchedule,
    gate_fidelity,
    pulse_for_rotation,
    rotation_unitary,
    schedule_unitary,
    score_schedule,
    simulate_schedule,
    synthesize_cnot,
    synthesize_cz,
    synthesize_rotation,
)
from .performance import (
    PerformanceReport,
    a_for_rabi_frequency,
    k_rabi,
    number_of_flips,
    flips_comparison,
    scale_by_voltage,
)

__all__ = [
    "CZ",
    "CNOT",
    "SegmentKind",
    "PulseSpec",
    "GateSegment",
    "GateSchedule",
    "GateFidelityReport",
    "SimulatedSchedule",
    "rotation_unitary",
    "pulse_for_rotation",
    "gate_fidelity",
    "synthesize_cz",
    "synthesize_cnot",
    "synthesize_rotation",
    "schedule_unitary",
    "simulate_schedule",
    "score_schedule",
    "PerformanceReport",
    "k_rabi",
    "a_for_rabi_frequency",
    "scale_by_voltage",
    "number_of_flips",
    "flips_comparison",
]
