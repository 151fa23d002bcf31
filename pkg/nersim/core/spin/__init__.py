"""
Spin operator algebra: arbitrary-S matrices, anticommutators and the qubit
subspace projection.
"""

from .operators import (
    QubitProjection,
    SpinOperators,
    SpinQuantum,
    anticommutator,
    half_spin_operators,
    is_hermitian,
    make_spin_operators,
    project_subspace_O,
    project_to_subspace,
    two_spin_embed,
)

__all__ = [
    "SpinQuantum",
    "SpinOperators",
    "QubitProjection",
    "make_spin_operators",
    "half_spin_operators",
    "anticommutator",
    "project_subspace_O",
    "project_to_subspace",
    "two_spin_embed",
    "is_hermitian",
]
