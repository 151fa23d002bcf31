#!/usr/bin/env python3
"""
Electric field gradient at the nucleus produced by hydrogenic electrons.

Provides the response coefficients A, B, C (oscillating drive) and B' (static
drive, second order through the Stark-mixed states), summed over all electrons,
and assembles the resulting 3x3 EFG tensors.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np

from ..constants import CODATA, PhysicalConstants
from ..errors import PhysicsDomainError
from .hydrogenic import (
    AngularKernel,
    AtomModel,
    Orbital,
    angular_integral,
    energy_level,
    radial_integral,
)

logger = logging.getLogger(__name__)

EFG_TOL = 1e-12
ANGULAR_ZERO = 1e-14
B_PRIME_CONVERGENCE = 1e-6
DEFAULT_N_PRIME_MAX = 10


@dataclass(frozen=True)
class BPrimeResult:
    """Truncated B' sum with its last-shell increment"""

    value: float  # m^-1
    last_increment: float  # m^-1
    n_prime_max: int
    converged: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class EfgCoefficients:
    """A, B, B' in m^-1 and C in V m^-2"""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    b_prime: float = 0.0
    b_prime_report: Optional[BPrimeResult] = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("a", "b", "c", "b_prime"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise PhysicsDomainError(f"EFG coefficient {name} must be finite, got {value}")
            object.__setattr__(self, name, float(value))

    def to_dict(self) -> Dict[str, Any]:
        data = {"a_per_m": self.a, "b_per_m": self.b, "c_V_m2": self.c, "bprime_per_m": self.b_prime}
        if self.b_prime_report is not None:
            data["bprime_convergence"] = self.b_prime_report.to_dict()
        return data


@dataclass(frozen=True)
class EfgTensor:
    """g[alpha][beta] = d_alpha E_beta at the nucleus, V m^-2"""

    g: np.ndarray

    def __post_init__(self):
        g = np.array(self.g, dtype=float)
        if g.shape != (3, 3):
            raise PhysicsDomainError(f"EFG tensor must be 3x3, got shape {g.shape}")
        scale = max(float(np.max(np.abs(g))), np.finfo(float).tiny)
        if np.max(np.abs(g - g.T)) > EFG_TOL * scale:
            raise PhysicsDomainError("EFG tensor is not symmetric")
        if abs(np.trace(g)) > EFG_TOL * scale:
            raise PhysicsDomainError(f"EFG tensor is not traceless (trace {np.trace(g):.3e})")
        g.setflags(write=False)
        object.__setattr__(self, "g", g)

    @classmethod
    def zero(cls) -> "EfgTensor":
        return cls(np.zeros((3, 3)))


def _electron_sum(atom: AtomModel, kernel: AngularKernel, power: int, weight) -> float:
    total = 0.0
    for electron in atom.electrons:
        z = atom.charge_of(electron)
        for lp, l, bilinear in electron.bilinears():
            w = weight(bilinear)
            if w == 0.0:
                continue
            angular = angular_integral(lp, l, electron.m, kernel)
            if abs(angular) < ANGULAR_ZERO:
                continue
            total += radial_integral(z, electron.n, lp, l, electron.n, power, atom.constants) * angular * w
    return total


def coefficient_c(atom: AtomModel) -> float:
    """Natural EFG coefficient C (V m^-2) from the <(1 - 3cos^2)/r^3> expectations"""
    constants = atom.constants
    total = _electron_sum(atom, AngularKernel.ONE_MINUS_3COS2, -3, lambda z: float(np.real(z)))
    return 0.5 * constants.k_coulomb * constants.e_charge * total


def _oscillating_coefficient(atom: AtomModel, omega: float, kernel: AngularKernel) -> float:
    if not omega > 0.0:
        raise PhysicsDomainError(f"Drive frequency must be positive, got {omega}")
    constants = atom.constants
    total = _electron_sum(atom, kernel, -2, lambda z: float(np.imag(z)))
    return constants.k_coulomb * constants.e_charge ** 2 / (constants.hbar * omega) * total


def coefficient_a(atom: AtomModel, omega: float) -> float:
    """
    A (m^-1), evaluated as written: the Im(c*_l' c_l) weights are antisymmetric
    in (l', l) while the matrix elements are symmetric, so the double sum cancels
    pairwise. Use estimate_a_rough for the order-of-magnitude value.
    """
    return _oscillating_coefficient(atom, omega, AngularKernel.COS_MINUS_COS3)


def coefficient_b(atom: AtomModel, omega: float) -> float:
    """B (m^-1); same structure as A with the cos - 3cos^3 kernel"""
    return _oscillating_coefficient(atom, omega, AngularKernel.COS_MINUS_3COS3)


def _shell_increment(atom: AtomModel, electron: Orbital, n_prime: int) -> float:
    """Contribution of intermediate shell n' to one electron's B' sum"""
    constants = atom.constants
    z = atom.charge_of(electron)
    n, m = electron.n, electron.m
    gap = energy_level(atom, n, m, z) - energy_level(atom, n_prime, m, z)
    increment = 0.0
    for l_prime in range(abs(m), n_prime):
        for l, c in electron.coeffs.items():
            dipole_angular = angular_integral(l_prime, l, m, AngularKernel.COS)
            if abs(dipole_angular) < ANGULAR_ZERO:
                continue
            dipole = None
            for l_dd, c_dd in electron.coeffs.items():
                weight = float(np.real(np.conj(c_dd) * c))
                if weight == 0.0:
                    continue
                efg_angular = angular_integral(l_dd, l_prime, m, AngularKernel.ONE_MINUS_3COS2)
                if abs(efg_angular) < ANGULAR_ZERO:
                    continue
                if dipole is None:
                    dipole = radial_integral(z, n_prime, l_prime, l, n, 1, constants) * dipole_angular
                efg = radial_integral(z, n, l_dd, l_prime, n_prime, -3, constants) * efg_angular
                increment += efg * dipole / gap * weight
    return increment


def coefficient_b_prime(atom: AtomModel, n_prime_max: int = DEFAULT_N_PRIME_MAX) -> BPrimeResult:
    """
    Static-field coefficient B' (m^-1), truncated at intermediate shells n' <= n_prime_max.

    B' = k e^2 sum_{n' != n} <n l''|(1-3cos^2)/r^3|n' l'><n' l'|z|n l> / (E_n - E_n')
         Re(c*_l'' c_l)

    Vanishes for states of definite parity; the Stark-mixed n=2 states give a
    nonzero value. The increment of shell n_prime_max is reported as the
    convergence estimate; bound-state terms only.
    """
    max_n = max(e.n for e in atom.electrons)
    if n_prime_max <= max_n:
        raise PhysicsDomainError(f"n_prime_max must exceed every electron's n (max n = {max_n})")
    constants = atom.constants
    prefactor = constants.k_coulomb * constants.e_charge ** 2

    total = 0.0
    last = 0.0
    for n_prime in range(1, n_prime_max + 1):
        shell = 0.0
        for electron in atom.electrons:
            if n_prime == electron.n:
                continue
            shell += _shell_increment(atom, electron, n_prime)
        total += prefactor * shell
        last = prefactor * shell

    converged = abs(last) <= B_PRIME_CONVERGENCE * abs(total) if total != 0.0 else last == 0.0
    if not converged:
        logger.warning(
            "B' sum not converged at n' = %d: last increment %.3e of total %.3e",
            n_prime_max, last, total,
        )
    return BPrimeResult(value=total, last_increment=last, n_prime_max=n_prime_max, converged=converged)


def efg_coefficients(
    atom: AtomModel, omega: float, n_prime_max: int = DEFAULT_N_PRIME_MAX
) -> EfgCoefficients:
    """All four coefficients for one atom at drive frequency omega"""
    b_prime = coefficient_b_prime(atom, n_prime_max)
    coeffs = EfgCoefficients(
        a=coefficient_a(atom, omega),
        b=coefficient_b(atom, omega),
        c=coefficient_c(atom),
        b_prime=b_prime.value,
        b_prime_report=b_prime,
    )
    logger.debug("EFG coefficients: %s", coeffs.to_dict())
    return coeffs


def efg_oscillating(coeffs: EfgCoefficients, e_tilde: Sequence[float]) -> EfgTensor:
    """EFG under the integrated oscillating field E~(t) = (E~x, E~y, E~z)"""
    ex, ey, ez = (float(v) for v in e_tilde)
    diag = coeffs.c - coeffs.b * ez
    xz = -3.0 * coeffs.a * ex
    yz = -3.0 * coeffs.a * ey
    g = np.array([
        [diag, 0.0, xz],
        [0.0, diag, yz],
        [xz, yz, -(diag + diag)],
    ])
    return EfgTensor(g)


def efg_static(coeffs: EfgCoefficients, e0: float) -> EfgTensor:
    """EFG with a static field E0 along z: diag(C + B'E0, C + B'E0, -2(C + B'E0))"""
    diag = coeffs.c + coeffs.b_prime * float(e0)
    return EfgTensor(np.diag([diag, diag, -(diag + diag)]))


def estimate_a_rough(constants: PhysicalConstants = CODATA, omega_ref: float = 1e7) -> float:
    """Order-of-magnitude A = k e^2 / (hbar omega a0^2)"""
    if not omega_ref > 0.0:
        raise PhysicsDomainError(f"omega_ref must be positive, got {omega_ref}")
    return constants.k_coulomb * constants.e_charge ** 2 / (constants.hbar * omega_ref * constants.a0_bohr ** 2)


def estimate_b_prime_rough(constants: PhysicalConstants = CODATA, z: int = 1) -> float:
    """Order-of-magnitude B' = k e^2 / ((E_2 - E_1) a0^2)"""
    if z < 1:
        raise PhysicsDomainError(f"Nuclear charge must be >= 1, got {z}")
    gap = z ** 2 * constants.rydberg_energy * (1.0 - 0.25)
    return constants.k_coulomb * constants.e_charge ** 2 / (gap * constants.a0_bohr ** 2)
