#!/usr/bin/env python3
"""
Physical constants used by the atomic and nuclear models.

Defaults are CODATA values taken from scipy.constants; every consumer accepts a
PhysicalConstants instance so tests and configs can override them.
"""

from dataclasses import asdict, dataclass, replace
from typing import Any, Dict, Mapping, Optional

from scipy import constants as cnst

from .errors import ConfigError

# Orbital gyromagnetic ratio of the electron, e/(2 m_e) (rad s^-1 T^-1)
ELECTRON_ORBITAL_GAMMA = cnst.e / (2.0 * cnst.m_e)


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants entering the hydrogenic and quadrupole formulas"""

    k_coulomb: float = 1.0 / (4.0 * cnst.pi * cnst.epsilon_0)  # N m^2 C^-2
    e_charge: float = cnst.e  # C
    hbar: float = cnst.hbar  # J s
    a0_bohr: float = cnst.physical_constants["Bohr radius"][0]  # m
    m_electron: float = cnst.m_e  # kg

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0.0:
                raise ConfigError(f"Physical constant {name} must be strictly positive, got {value}")

    @property
    def rydberg_energy(self) -> float:
        """m_e (k e^2)^2 / (2 hbar^2), the hydrogen ground-state binding energy (J)"""
        ke2 = self.k_coulomb * self.e_charge ** 2
        return self.m_electron * ke2 ** 2 / (2.0 * self.hbar ** 2)

    def with_overrides(self, overrides: Optional[Mapping[str, Any]]) -> "PhysicalConstants":
        """Copy with selected constants replaced (None entries are ignored)"""
        if not overrides:
            return self
        values = {k: float(v) for k, v in overrides.items() if v is not None}
        unknown = set(values) - set(asdict(self))
        if unknown:
            raise ConfigError(f"Unknown physical constants: {sorted(unknown)}")
        return replace(self, **values)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


CODATA = PhysicalConstants()
