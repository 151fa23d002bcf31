#!/usr/bin/env python3
"""
Gate synthesis for NER qubits.

Single-qubit rotations come from resonant quadrupole drives in the subspace
{S, S-1}; CZ and CNOT come from a J(t) window plus static-field z-shifts.
Schedules are written in the doubly rotating frame (each nucleus rotating at
its own idle qubit resonance), where every segment's propagator is
independent of when the segment starts.
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..atomic.efg import EfgCoefficients
from ..errors import PhysicsDomainError, ShapeMismatchError
from ..physics.dynamics import (
    IntegratorConfig,
    expm_hermitian,
    factored_unitary,
    propagator,
    restrict_two_qubit,
    rotation_matrix,
    unitarity_residue,
)
from ..physics.hamiltonians import (
    DriveParams,
    HamiltonianModel,
    JSchedule,
    NucleusParams,
    TwoQubitParams,
    h_lqse,
    h_single,
    h_two,
    resonance_omega_single,
    rotating_frame_model,
    subspace_drive_strength,
)
from ..spin import make_spin_operators

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
GATE_UNITARITY_TOL = 1e-6

CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


class SegmentKind(Enum):
    DRIVE1 = "drive1"
    DRIVE2 = "drive2"
    Z_SHIFT1 = "z_shift1"
    Z_SHIFT2 = "z_shift2"
    J_WINDOW = "j_window"


@dataclass(frozen=True)
class PulseSpec:
    """Resonant drive realizing one rotation"""

    e_amp: float  # V/m
    phi: float  # rad
    omega: float  # rad/s
    duration: float  # s

    def __post_init__(self):
        if self.duration < 0.0:
            raise PhysicsDomainError(f"Pulse duration must be >= 0, got {self.duration}")

    def to_dict(self) -> Dict[str, float]:
        return {"e_amp_V_m": self.e_amp, "phi_rad": self.phi, "omega_rad_s": self.omega, "duration_s": self.duration}


@dataclass(frozen=True)
class GateSegment:
    """
    One piecewise-constant control segment.

    DRIVE segments use e_amp/phi/omega; Z_SHIFT segments hold the static field
    e_static on their nucleus; J_WINDOW holds j_hz.
    """

    kind: SegmentKind
    duration: float
    e_amp: float = 0.0
    phi: float = 0.0
    omega: float = 0.0
    e_static: float = 0.0
    j_hz: float = 0.0

    def __post_init__(self):
        if self.duration < 0.0:
            raise PhysicsDomainError(f"Segment duration must be >= 0, got {self.duration}")

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value, "duration_s": self.duration}
        if self.kind in (SegmentKind.DRIVE1, SegmentKind.DRIVE2):
            data.update(e_amp_V_m=self.e_amp, phi_rad=self.phi, omega_rad_s=self.omega)
        elif self.kind is SegmentKind.J_WINDOW:
            data["j_Hz"] = self.j_hz
        else:
            data["e_static_V_m"] = self.e_static
        return data


@dataclass(frozen=True)
class GateSchedule:
    name: str
    segments: Tuple[GateSegment, ...] = ()

    @property
    def total_duration(self) -> float:
        return float(sum(seg.duration for seg in self.segments))

    def then(self, other: "GateSchedule", name: Optional[str] = None) -> "GateSchedule":
        """This schedule followed by ``other``"""
        return GateSchedule(name or f"{self.name}+{other.name}", self.segments + other.segments)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "total_duration_s": self.total_duration,
            "segments": [seg.to_dict() for seg in self.segments],
        }


@dataclass(frozen=True)
class GateFidelityReport:
    fidelity: float
    leakage: float
    target_name: str

    def to_dict(self) -> Dict[str, Any]:
        return {"fidelity": self.fidelity, "leakage": self.leakage, "target_name": self.target_name}


@dataclass(frozen=True)
class SimulatedSchedule:
    """4x4 qubit block of the simulated schedule and its average leakage"""

    unitary: np.ndarray
    leakage: float


def rotation_unitary(angle: float, phi: float) -> np.ndarray:
    """Ideal rotation by ``angle`` about (cos phi, sin phi, 0)"""
    return rotation_matrix(angle, phi)


def _normalize_angle(angle: float) -> float:
    return angle % TWO_PI


def pulse_for_rotation(
    nucleus: NucleusParams,
    coeffs: EfgCoefficients,
    e_amp: float,
    axis_phi: float,
    angle: float,
    b0: float = 0.0,
    e0: float = 0.0,
) -> PulseSpec:
    """
    Resonant pulse rotating the qubit by ``angle`` about axis_phi.

    Angles are taken modulo 2 pi; a negative Rabi frequency (Q A < 0) is
    absorbed by turning the axis by pi.
    """
    if nucleus.s.two_s == 1:
        raise PhysicsDomainError("No NER drive exists for a spin-1/2 nucleus")
    if not e_amp > 0.0:
        raise PhysicsDomainError(f"Drive amplitude must be > 0, got {e_amp}")
    omega_r = subspace_drive_strength(nucleus, coeffs, e_amp)
    if omega_r == 0.0:
        raise PhysicsDomainError("Zero Rabi frequency: A or Q vanishes, no drive possible")
    phi = axis_phi if omega_r > 0.0 else axis_phi + math.pi
    return PulseSpec(
        e_amp=e_amp,
        phi=_normalize_angle(phi),
        omega=resonance_omega_single(nucleus, coeffs, e0, b0),
        duration=_normalize_angle(angle) / abs(omega_r),
    )


def gate_fidelity(u_actual: np.ndarray, u_target: np.ndarray) -> float:
    """|tr(U_target^dag U_actual)| / d"""
    u_actual = np.asarray(u_actual, dtype=complex)
    u_target = np.asarray(u_target, dtype=complex)
    if u_actual.shape != u_target.shape or u_actual.ndim != 2 or u_actual.shape[0] != u_actual.shape[1]:
        raise ShapeMismatchError(f"Cannot compare shapes {u_actual.shape} and {u_target.shape}")
    for name, u in (("actual", u_actual), ("target", u_target)):
        residue = unitarity_residue(u)
        if residue > GATE_UNITARITY_TOL:
            raise PhysicsDomainError(f"{name} matrix is not unitary (residue {residue:.3e})")
    d = u_actual.shape[0]
    fidelity = abs(np.trace(u_target.conj().T @ u_actual)) / d
    return float(min(max(fidelity, 0.0), 1.0))


def _z_shift_duration(needed: float, rate: float, label: str) -> float:
    needed = needed % TWO_PI
    if math.isclose(needed, 0.0, abs_tol=1e-15) or math.isclose(needed, TWO_PI, rel_tol=1e-15):
        return 0.0
    if rate == 0.0:
        raise PhysicsDomainError(f"{label}: static field gives no phase rate (B' E or Q vanishes)")
    # rate < 0 runs the phase backwards, so it must cover 2 pi - needed
    return (needed if rate > 0.0 else TWO_PI - needed) / abs(rate)


def _z_shift_rate(nucleus: NucleusParams, b_prime: float, e_static: float) -> float:
    return 3.0 * (nucleus.s.two_s - 1) * nucleus.q_tilde_hbar * b_prime * e_static


def synthesize_cz(params: TwoQubitParams, j_const: float) -> GateSchedule:
    """
    J window of 1/(2|J|) (controlled phase pi), then static-field z-shifts on
    each nucleus bringing both single-qubit phases to -sign(J) pi/2.
    """
    if j_const == 0.0:
        raise PhysicsDomainError("CZ needs a nonzero J coupling")
    tau = 1.0 / (2.0 * abs(j_const))
    sign = math.copysign(1.0, j_const)
    n_half = params.s.two_s - 1
    window_phase = n_half * math.pi * j_const * tau
    target = -sign * math.pi / 2.0

    rate1 = _z_shift_rate(params.nucleus1, params.b_prime1, params.e1)
    rate2 = _z_shift_rate(params.nucleus2, params.b_prime2, params.e2)
    tau1 = _z_shift_duration(target - window_phase, rate1, "Z shift on nucleus 1")
    tau2 = _z_shift_duration(target - window_phase, rate2, "Z shift on nucleus 2")

    segments: List[GateSegment] = [GateSegment(SegmentKind.J_WINDOW, tau, j_hz=j_const)]
    if tau1 > 0.0:
        segments.append(GateSegment(SegmentKind.Z_SHIFT1, tau1, e_static=params.e1))
    if tau2 > 0.0:
        segments.append(GateSegment(SegmentKind.Z_SHIFT2, tau2, e_static=params.e2))
    schedule = GateSchedule("CZ", tuple(segments))
    logger.debug("CZ schedule: %s", schedule.to_dict())
    return schedule


def _drive_segment(params: TwoQubitParams, which: int, axis_phi: float, angle: float) -> GateSegment:
    nucleus = params.nucleus1 if which == 1 else params.nucleus2
    coeffs = params.coeffs1 if which == 1 else params.coeffs2
    pulse = pulse_for_rotation(nucleus, coeffs, params.e_drive, axis_phi, angle, b0=params.b0)
    kind = SegmentKind.DRIVE1 if which == 1 else SegmentKind.DRIVE2
    return GateSegment(kind, pulse.duration, e_amp=pulse.e_amp, phi=pulse.phi, omega=pulse.omega)


def synthesize_rotation(params: TwoQubitParams, which: int, axis_phi: float, angle: float) -> GateSchedule:
    """Single-qubit rotation on nucleus ``which`` (1 or 2) while the other idles"""
    if which not in (1, 2):
        raise PhysicsDomainError(f"Nucleus index must be 1 or 2, got {which}")
    return GateSchedule(f"R{which}", (_drive_segment(params, which, axis_phi, angle),))


def synthesize_cnot(params: TwoQubitParams, j_const: float) -> GateSchedule:
    """Ry(pi/2) on the target after CZ, Ry(-pi/2) before; nucleus 1 controls"""
    before = _drive_segment(params, 2, math.pi / 2.0, -math.pi / 2.0)
    after = _drive_segment(params, 2, math.pi / 2.0, math.pi / 2.0)
    cz = synthesize_cz(params, j_const)
    return GateSchedule("CNOT", (before, *cz.segments, after))


def _segment_params(params: TwoQubitParams, seg: GateSegment) -> TwoQubitParams:
    e1 = seg.e_static if seg.kind is SegmentKind.Z_SHIFT1 else 0.0
    e2 = seg.e_static if seg.kind is SegmentKind.Z_SHIFT2 else 0.0
    j = JSchedule.constant(seg.j_hz, seg.duration) if seg.kind is SegmentKind.J_WINDOW else JSchedule()
    return replace(params, e1=e1, e2=e2, j_schedule=j)


def _ideal_segment(params: TwoQubitParams, seg: GateSegment) -> np.ndarray:
    frames = params.idle_frequencies()
    if seg.kind in (SegmentKind.DRIVE1, SegmentKind.DRIVE2):
        nucleus = params.nucleus1 if seg.kind is SegmentKind.DRIVE1 else params.nucleus2
        coeffs = params.coeffs1 if seg.kind is SegmentKind.DRIVE1 else params.coeffs2
        rot = rotation_matrix(subspace_drive_strength(nucleus, coeffs, seg.e_amp) * seg.duration, seg.phi)
        eye = np.eye(2, dtype=complex)
        return np.kron(rot, eye) if seg.kind is SegmentKind.DRIVE1 else np.kron(eye, rot)
    return factored_unitary(_segment_params(params, seg), seg.duration, frames)


def schedule_unitary(params: TwoQubitParams, schedule: GateSchedule) -> np.ndarray:
    """Ideal 4x4 composition of the schedule on {S, S-1} x {S, S-1}"""
    u = np.eye(4, dtype=complex)
    for seg in schedule.segments:
        u = _ideal_segment(params, seg) @ u
    return u


def _idle_generator(nucleus: NucleusParams, coeffs: EfgCoefficients, b0: float, frame: float) -> np.ndarray:
    ops = make_spin_operators(nucleus.s)
    return h_lqse(nucleus, ops, coeffs, 0.0, b0) - frame * ops.sz


def _simulated_segment(
    params: TwoQubitParams, seg: GateSegment, t0: float, cfg: IntegratorConfig
) -> np.ndarray:
    w1, w2 = params.idle_frequencies()
    ops = make_spin_operators(params.s)
    if seg.kind in (SegmentKind.DRIVE1, SegmentKind.DRIVE2):
        first = seg.kind is SegmentKind.DRIVE1
        nucleus, coeffs, frame = (
            (params.nucleus1, params.coeffs1, w1) if first else (params.nucleus2, params.coeffs2, w2)
        )
        drive = DriveParams(e_amp=seg.e_amp, omega=seg.omega or frame, phi=seg.phi, b0=params.b0)
        model = rotating_frame_model(h_single(nucleus, ops, coeffs, drive), ops.sz, frame)
        driven = propagator(model, t0 + seg.duration, cfg, t0=t0)
        if first:
            idle = expm_hermitian(_idle_generator(params.nucleus2, params.coeffs2, params.b0, w2), seg.duration)
            return np.kron(driven, idle)
        idle = expm_hermitian(_idle_generator(params.nucleus1, params.coeffs1, params.b0, w1), seg.duration)
        return np.kron(idle, driven)

    seg_params = _segment_params(params, seg)
    h = h_two(seg_params, 0.0) - seg_params.frame_sz((w1, w2))
    return propagator(HamiltonianModel.constant(h, label=seg.kind.value), t0 + seg.duration, cfg, t0=t0)


def simulate_schedule(
    params: TwoQubitParams,
    schedule: GateSchedule,
    cfg: Optional[IntegratorConfig] = None,
    t_start: float = 0.0,
) -> SimulatedSchedule:
    """
    Full-dimensional evaluation of the schedule in the doubly rotating frame.

    Drive segments propagate h_single of the driven nucleus in its own frame,
    z segments propagate h_two; leakage is averaged over the four qubit inputs.
    """
    cfg = cfg or IntegratorConfig()
    dim = params.s.dim
    u = np.eye(dim * dim, dtype=complex)
    t = t_start
    for seg in schedule.segments:
        u = _simulated_segment(params, seg, t, cfg) @ u
        t += seg.duration
    block = restrict_two_qubit(u, dim)
    leak = float(max(0.0, 1.0 - np.sum(np.abs(block) ** 2) / 4.0))
    return SimulatedSchedule(unitary=block, leakage=leak)


def _closest_unitary(block: np.ndarray) -> np.ndarray:
    """Polar factor of a (slightly leaky) block"""
    w, _, vh = np.linalg.svd(block)
    return w @ vh


def score_schedule(
    params: TwoQubitParams,
    schedule: GateSchedule,
    target: np.ndarray,
    target_name: str,
    cfg: Optional[IntegratorConfig] = None,
    ideal: bool = False,
) -> GateFidelityReport:
    """
    Fidelity of a schedule against a 4x4 target.

    The leaky simulated block is scored as |tr(U_t^dag B)| / 4, i.e. without
    renormalizing away the lost population.
    """
    if ideal:
        return GateFidelityReport(gate_fidelity(schedule_unitary(params, schedule), target), 0.0, target_name)
    sim = simulate_schedule(params, schedule, cfg)
    target = np.asarray(target, dtype=complex)
    # validates the target and the shape; the block itself may leak
    gate_fidelity(_closest_unitary(sim.unitary), target)
    fidelity = float(min(1.0, abs(np.trace(target.conj().T @ sim.unitary)) / 4.0))
    return GateFidelityReport(fidelity=fidelity, leakage=sim.leakage, target_name=target_name)
