#!/usr/bin/env python3
"""
Hydrogen-like electron states and the matrix elements feeding the EFG formulas.

Each electron is an unscreened hydrogenic orbital |n l m> (no electron spin, no
correlation). Radial integrals use adaptive Gauss-Kronrod quadrature, angular
integrals a fixed 32-point Gauss-Legendre rule in cos(theta).
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import factorial, genlaguerre

from ..constants import CODATA, ELECTRON_ORBITAL_GAMMA, PhysicalConstants
from ..errors import PhysicsDomainError, QuadratureError

logger = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-10
RADIAL_RTOL = 1e-10
RADIAL_ATOL = 1e-12  # in units of a0**power
RADIAL_CUTOFF_FACTOR = 50.0
GAUSS_LEGENDRE_ORDER = 32
SUPPORTED_POWERS = (-3, -2, 0, 1)


class AngularKernel(Enum):
    """Polynomials in cos(theta) appearing in the EFG matrix elements"""

    COS_MINUS_COS3 = "cos_minus_cos3"
    COS_MINUS_3COS3 = "cos_minus_3cos3"
    ONE_MINUS_3COS2 = "one_minus_3cos2"
    COS = "cos"

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if self is AngularKernel.COS_MINUS_COS3:
            return x - x ** 3
        if self is AngularKernel.COS_MINUS_3COS3:
            return x - 3.0 * x ** 3
        if self is AngularKernel.ONE_MINUS_3COS2:
            return 1.0 - 3.0 * x ** 2
        return x

    @property
    def degree(self) -> int:
        return {
            AngularKernel.COS_MINUS_COS3: 3,
            AngularKernel.COS_MINUS_3COS3: 3,
            AngularKernel.ONE_MINUS_3COS2: 2,
            AngularKernel.COS: 1,
        }[self]


@dataclass(frozen=True)
class Orbital:
    """
    One electron in the degenerate (n, m) shell: sum_l c_l |n l m>.

    coeffs maps l to a complex amplitude; z_eff overrides the atom's nuclear
    charge for this electron.
    """

    n: int
    m: int
    coeffs: Mapping[int, complex]
    z_eff: Optional[int] = None

    def __post_init__(self):
        if self.n < 1:
            raise PhysicsDomainError(f"Principal quantum number must be >= 1, got {self.n}")
        if abs(self.m) > self.n - 1:
            raise PhysicsDomainError(f"|m| = {abs(self.m)} exceeds n - 1 = {self.n - 1}")
        if not self.coeffs:
            raise PhysicsDomainError("Orbital needs at least one coefficient")
        cleaned = {}
        for l, c in self.coeffs.items():
            l = int(l)
            if not abs(self.m) <= l <= self.n - 1:
                raise PhysicsDomainError(
                    f"Coefficient for l={l} outside [{abs(self.m)}, {self.n - 1}] (n={self.n}, m={self.m})"
                )
            cleaned[l] = complex(c)
        norm = sum(abs(c) ** 2 for c in cleaned.values())
        if abs(norm - 1.0) > NORMALIZATION_TOL:
            raise PhysicsDomainError(f"Orbital coefficients not normalized: sum |c_l|^2 = {norm!r}")
        if self.z_eff is not None and self.z_eff < 1:
            raise PhysicsDomainError(f"z_eff must be >= 1, got {self.z_eff}")
        object.__setattr__(self, "coeffs", dict(sorted(cleaned.items())))

    @classmethod
    def pure(cls, n: int, l: int, m: int, z_eff: Optional[int] = None) -> "Orbital":
        return cls(n=n, m=m, coeffs={l: 1.0}, z_eff=z_eff)

    def bilinears(self) -> List[Tuple[int, int, complex]]:
        """(l', l, c*_l' c_l) for all coefficient pairs"""
        return [
            (lp, l, np.conj(cp) * c)
            for lp, cp in self.coeffs.items()
            for l, c in self.coeffs.items()
        ]

    def with_global_phase(self, phase: float) -> "Orbital":
        factor = np.exp(1j * phase)
        return Orbital(self.n, self.m, {l: c * factor for l, c in self.coeffs.items()}, self.z_eff)


@dataclass(frozen=True)
class AtomModel:
    """Nucleus of charge Z with a list of independent hydrogenic electrons"""

    z_atomic: int
    electrons: Tuple[Orbital, ...]
    gamma_e: float = ELECTRON_ORBITAL_GAMMA  # rad s^-1 T^-1
    b0: float = 0.0  # T
    constants: PhysicalConstants = field(default=CODATA)

    def __post_init__(self):
        if self.z_atomic < 1:
            raise PhysicsDomainError(f"z_atomic must be >= 1, got {self.z_atomic}")
        electrons = tuple(self.electrons)
        if not electrons:
            raise PhysicsDomainError("AtomModel needs at least one electron")
        object.__setattr__(self, "electrons", electrons)

    def charge_of(self, electron: Orbital) -> int:
        return electron.z_eff if electron.z_eff is not None else self.z_atomic


def energy_level(atom: AtomModel, n: int, m: int, z: Optional[int] = None) -> float:
    """
    E_nm = -Z^2 m_e (k e^2)^2 / (2 n^2 hbar^2) + gamma_e B0 m hbar, in joules.
    """
    if n < 1 or abs(m) > n - 1:
        raise PhysicsDomainError(f"Invalid quantum numbers n={n}, m={m}")
    charge = atom.z_atomic if z is None else z
    constants = atom.constants
    return -(charge ** 2) * constants.rydberg_energy / n ** 2 + atom.gamma_e * atom.b0 * m * constants.hbar


def _check_nl(n: int, l: int) -> None:
    if n < 1 or not 0 <= l <= n - 1:
        raise PhysicsDomainError(f"Invalid hydrogenic quantum numbers n={n}, l={l}")


@lru_cache(maxsize=256)
def _radial_polynomial(n: int, l: int) -> Tuple[float, np.poly1d]:
    norm = math.sqrt((2.0 / n) ** 3 * factorial(n - l - 1, exact=True) / (2.0 * n * factorial(n + l, exact=True)))
    return norm, genlaguerre(n - l - 1, 2 * l + 1)


def _radial_reduced(z: float, n: int, l: int, x: np.ndarray) -> np.ndarray:
    """R_nl at x = r/a0, in units of a0**-1.5"""
    norm, laguerre = _radial_polynomial(n, l)
    rho = 2.0 * z * x / n
    return z ** 1.5 * norm * np.exp(-rho / 2.0) * rho ** l * laguerre(rho)


def radial_function(z: int, n: int, l: int, r: np.ndarray, constants: PhysicalConstants = CODATA) -> np.ndarray:
    """Normalized R_nl(r) in m^-1.5, with int R^2 r^2 dr = 1"""
    _check_nl(n, l)
    a0 = constants.a0_bohr
    return _radial_reduced(z, n, l, np.asarray(r, dtype=float) / a0) / a0 ** 1.5


@lru_cache(maxsize=4096)
def radial_integral(
    z: int,
    n: int,
    l1: int,
    l2: int,
    n2: int,
    power: int,
    constants: PhysicalConstants = CODATA,
) -> float:
    """
    int_0^inf R_{n l1}(r) R_{n2 l2}(r) r^power r^2 dr, in m^power.

    Integration runs over (0, 50 n_max^2 a0 / Z); the neglected tail is bounded
    from the integrand at the cutoff and must stay below the quadrature tolerance.
    """
    _check_nl(n, l1)
    _check_nl(n2, l2)
    if z < 1:
        raise PhysicsDomainError(f"Nuclear charge must be >= 1, got {z}")
    if power not in SUPPORTED_POWERS:
        raise PhysicsDomainError(f"Unsupported radial power {power}; expected one of {SUPPORTED_POWERS}")
    if l1 + l2 + power + 2 <= -1:
        raise PhysicsDomainError(
            f"Radial integral diverges at the origin for l1={l1}, l2={l2}, power={power}"
        )

    x_max = RADIAL_CUTOFF_FACTOR * max(n, n2) ** 2 / z

    def integrand(x: float) -> float:
        return float(_radial_reduced(z, n, l1, x) * _radial_reduced(z, n2, l2, x) * x ** (power + 2))

    # most of the weight sits within a few n^2/Z Bohr radii
    peaks = sorted({n ** 2 / z, n2 ** 2 / z})
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, abserr = quad(integrand, 0.0, x_max, epsabs=RADIAL_ATOL, epsrel=RADIAL_RTOL, limit=400, points=peaks)

    allowed = max(RADIAL_RTOL * abs(value), RADIAL_ATOL)
    for w in caught:
        logger.debug("quad: %s", w.message)
    if abserr > 10.0 * allowed:
        raise QuadratureError(
            f"Radial quadrature did not converge for n={n}, l1={l1}, n2={n2}, l2={l2}, power={power}",
            achieved_error=float(abserr),
            details={"value": value, "warnings": [str(w.message) for w in caught]},
        )

    # exponential envelope exp(-Z x (1/n + 1/n2)) gives the tail length below
    decay_length = 1.0 / (z * (1.0 / n + 1.0 / n2))
    tail = abs(integrand(x_max)) * decay_length * 10.0
    if tail > allowed:
        logger.warning("Radial tail beyond cutoff (%.3e) exceeds tolerance (%.3e)", tail, allowed)

    return value * constants.a0_bohr ** power


def associated_legendre(l: int, m: int, x: np.ndarray) -> np.ndarray:
    """
    P_l^m(x) with the Condon-Shortley phase, by upward recurrence in l.
    """
    m = abs(m)
    if l < m:
        raise PhysicsDomainError(f"Invalid (l, m) = ({l}, {m})")
    x = np.asarray(x, dtype=float)
    p_mm = np.ones_like(x)
    if m > 0:
        somx2 = np.sqrt((1.0 - x) * (1.0 + x))
        fact = 1.0
        for _ in range(m):
            p_mm = -p_mm * fact * somx2
            fact += 2.0
    if l == m:
        return p_mm
    p_prev, p_curr = p_mm, x * (2 * m + 1) * p_mm
    for ll in range(m + 2, l + 1):
        p_prev, p_curr = p_curr, ((2 * ll - 1) * x * p_curr - (ll + m - 1) * p_prev) / (ll - m)
    return p_curr


def _ylm_norm(l: int, m: int) -> float:
    return math.sqrt((2 * l + 1) / (4.0 * math.pi) * math.factorial(l - m) / math.factorial(l + m))


@lru_cache(maxsize=1)
def _gauss_legendre() -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(GAUSS_LEGENDRE_ORDER)


def angular_integral(l1: int, l2: int, m: int, kernel: AngularKernel) -> float:
    """
    int Y*_{l1 m} kernel(cos theta) Y_{l2 m} dOmega.

    The phi integral gives 2 pi; the theta part is exact under 32-point
    Gauss-Legendre for the polynomial degrees met here.
    """
    if l1 < 0 or l2 < 0 or abs(m) > min(l1, l2):
        raise PhysicsDomainError(f"Invalid angular quantum numbers l1={l1}, l2={l2}, m={m}")
    m = abs(m)
    nodes, weights = _gauss_legendre()
    values = associated_legendre(l1, m, nodes) * associated_legendre(l2, m, nodes) * kernel(nodes)
    return float(2.0 * math.pi * _ylm_norm(l1, m) * _ylm_norm(l2, m) * np.dot(weights, values))


def dipole_z_element(z: int, n1: int, l1: int, n2: int, l2: int, m: int, constants: PhysicalConstants = CODATA) -> float:
    """<n1 l1 m| r cos(theta) |n2 l2 m> in metres"""
    angular = angular_integral(l1, l2, m, AngularKernel.COS)
    if abs(angular) < 1e-14:
        return 0.0
    return radial_integral(z, n1, l1, l2, n2, 1, constants) * angular


@dataclass(frozen=True)
class StarkState:
    """Zeroth-order state of the degenerate shell under a static field along z"""

    shift_per_field: float  # J per (V/m)
    orbital: Orbital


def degenerate_stark_states(
    z: int, n: int, m: int, constants: PhysicalConstants = CODATA
) -> List[StarkState]:
    """
    Diagonalize e z E0 inside the (n, m) shell.

    Returns first-order shifts per unit field with the corresponding c_l sets,
    ordered by ascending shift.
    """
    if n < 1 or abs(m) > n - 1:
        raise PhysicsDomainError(f"Invalid quantum numbers n={n}, m={m}")
    ls = list(range(abs(m), n))
    block = np.zeros((len(ls), len(ls)))
    for i, la in enumerate(ls):
        for j, lb in enumerate(ls):
            block[i, j] = constants.e_charge * dipole_z_element(z, n, la, n, lb, m, constants)
    block = 0.5 * (block + block.T)
    shifts, vectors = np.linalg.eigh(block)
    states = []
    for k in range(len(ls)):
        vec = vectors[:, k]
        # fix the sign so the largest component is positive
        vec = vec * np.sign(vec[np.argmax(np.abs(vec))])
        coeffs: Dict[int, complex] = {l: complex(c) for l, c in zip(ls, vec) if abs(c) > 1e-15}
        norm = math.sqrt(sum(abs(c) ** 2 for c in coeffs.values()))
        coeffs = {l: c / norm for l, c in coeffs.items()}
        states.append(StarkState(shift_per_field=float(shifts[k]), orbital=Orbital(n=n, m=m, coeffs=coeffs, z_eff=z)))
    return states
