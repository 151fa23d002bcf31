#!/usr/bin/env python3
"""
Rabi-frequency scaling and number-of-flips figures of merit.

N_f = T2* x f_R counts coherent Rabi cycles within one dephasing time.
T2* and measured Rabi frequencies are inputs here, never derived.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List

from ..errors import PhysicsDomainError
from ..physics.hamiltonians import NucleusParams

logger = logging.getLogger(__name__)

# Sb reference operating point: measured Rabi frequency at 20 mV RF, T2* = 92 ms
SB_F_RABI_HZ = 684.2
SB_V_RF_V = 20e-3
SB_T2_STAR_S = 92e-3
SCALED_V_RF_V = 4.0

# (label, T2* in s, f_R in Hz) for the two electrically driven hyperfine references
ENMHSE_ROWS = (
    ("ENMHSE (Tb)", 0.064e-3, 180.8e3),
    ("ENMHSE (P)", 0.97e-3, 5e3),
)


@dataclass(frozen=True)
class PerformanceReport:
    t2_star: float  # s
    f_rabi: float  # Hz
    n_flips: float
    method_label: str

    @property
    def rounded_flips(self) -> float:
        return round(self.n_flips, 2)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["n_flips_rounded"] = self.rounded_flips
        return data


def _require_quadrupolar(nucleus: NucleusParams) -> None:
    if nucleus.s.two_s == 1:
        raise PhysicsDomainError("Rabi coupling is undefined for a spin-1/2 nucleus")


def k_rabi(nucleus: NucleusParams, a_coeff: float) -> float:
    """|3 e Q A / (2 pi sqrt(2S) hbar)|, Hz per V/m"""
    _require_quadrupolar(nucleus)
    c = nucleus.constants
    return abs(3.0 * c.e_charge * nucleus.q_moment * a_coeff / (2.0 * math.pi * math.sqrt(nucleus.s.two_s) * c.hbar))


def a_for_rabi_frequency(nucleus: NucleusParams, f_rabi: float, e_amp: float) -> float:
    """Magnitude of A (m^-1) giving Rabi frequency f_rabi at amplitude e_amp"""
    _require_quadrupolar(nucleus)
    if not e_amp > 0.0 or nucleus.q_moment == 0.0:
        raise PhysicsDomainError("Need e_amp > 0 and a nonzero quadrupole moment")
    c = nucleus.constants
    return 2.0 * math.pi * math.sqrt(nucleus.s.two_s) * c.hbar * f_rabi / (3.0 * c.e_charge * abs(nucleus.q_moment) * e_amp)


def scale_by_voltage(f_rabi: float, v_ref: float, v_new: float) -> float:
    """Rabi frequency is linear in drive amplitude, hence in RF voltage"""
    if not v_ref > 0.0:
        raise PhysicsDomainError(f"Reference voltage must be > 0, got {v_ref}")
    return f_rabi * (v_new / v_ref)


def number_of_flips(t2_star: float, f_rabi: float) -> float:
    if t2_star < 0.0 or f_rabi < 0.0:
        raise PhysicsDomainError("T2* and f_R must be non-negative")
    return t2_star * f_rabi


def report(t2_star: float, f_rabi: float, method_label: str) -> PerformanceReport:
    return PerformanceReport(t2_star, f_rabi, number_of_flips(t2_star, f_rabi), method_label)


def flips_comparison(
    f_rabi: float = SB_F_RABI_HZ,
    v_ref: float = SB_V_RF_V,
    v_new: float = SCALED_V_RF_V,
    t2_star: float = SB_T2_STAR_S,
) -> List[PerformanceReport]:
    """Two hyperfine reference rows, then NER on Sb with the RF voltage scaled up"""
    rows = [report(t2, f, label) for label, t2, f in ENMHSE_ROWS]
    scaled = scale_by_voltage(f_rabi, v_ref, v_new)
    logger.debug("Scaled Rabi frequency %.6g Hz -> %.6g Hz", f_rabi, scaled)
    rows.append(report(t2_star, scaled, "NER (Sb)"))
    return rows
