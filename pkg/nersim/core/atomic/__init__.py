"""
Hydrogenic electron model and the EFG coefficients it produces.
"""

from .efg import (
    BPrimeResult,
    EfgCoefficients,
    EfgTensor,
    coefficient_a,
    coefficient_b,
    coefficient_b_prime,
    coefficient_c,
    efg_coefficients,
    efg_oscillating,
    efg_static,
    estimate_a_rough,
    estimate_b_prime_rough,
)
from .hydrogenic import (
    AngularKernel,
    AtomModel,
    Orbital,
    StarkState,
    angular_integral,
    associated_legendre,
    degenerate_stark_states,
    dipole_z_element,
    energy_level,
    radial_function,
    radial_integral,
)

__all__ = [
    "AngularKernel",
    "AtomModel",
    "Orbital",
    "StarkState",
    "energy_level",
    "radial_function",
    "radial_integral",
    "associated_legendre",
    "angular_integral",
    "dipole_z_element",
    "degenerate_stark_states",
    "EfgCoefficients",
    "EfgTensor",
    "BPrimeResult",
    "coefficient_a",
    "coefficient_b",
    "coefficient_c",
    "coefficient_b_prime",
    "efg_coefficients",
    "efg_oscillating",
    "efg_static",
    "estimate_a_rough",
    "estimate_b_prime_rough",
]
