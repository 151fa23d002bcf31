#!/usr/bin/env python3
"""
Time evolution of nuclear spin states.

evolve() is the brute-force reference: a midpoint-sampled matrix exponential
per step with step-halving (Richardson) error control. The closed-form
propagators below are checked against it.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..atomic.efg import EfgCoefficients
from ..errors import IntegratorStiffnessError, OffResonanceError, PhysicsDomainError, ShapeMismatchError
from ..spin import SpinOperators, anticommutator, half_spin_operators
from .hamiltonians import (
    DriveParams,
    HamiltonianModel,
    NucleusParams,
    TwoQubitParams,
    _frame_pair,
    resonance_omega_single,
    subspace_drive_strength,
)

logger = logging.getLogger(__name__)

# A state vector is a 1-D complex array over the m = S..-S basis (or the
# two-spin tensor basis); a propagator is a d x d complex array.
StateVector = np.ndarray
Propagator = np.ndarray

NORM_TOL = 1e-10
UNITARITY_TOL = 1e-9
RESONANCE_RTOL = 1e-6
MIN_STEP = 1e-18


@dataclass(frozen=True)
class IntegratorConfig:
    """Adaptive midpoint-exponential integrator settings"""

    dt_max: float = 1e-3  # s
    tol: float = 1e-10
    min_dt: float = MIN_STEP

    def __post_init__(self):
        if not self.dt_max > 0.0:
            raise PhysicsDomainError(f"dt_max must be > 0, got {self.dt_max}")
        if not self.tol > 0.0:
            raise PhysicsDomainError(f"tol must be > 0, got {self.tol}")


@dataclass(frozen=True)
class LeakageReport:
    leakage: float
    mean_leakage: float
    fidelity: Optional[float] = None


def as_state_vector(psi: Sequence[complex], dim: Optional[int] = None) -> StateVector:
    """Validate a normalized state of the expected dimension"""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if dim is not None and psi.shape[0] != dim:
        raise ShapeMismatchError(f"State of length {psi.shape[0]} does not match dimension {dim}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise PhysicsDomainError(f"State is not normalized (norm {norm!r})")
    return psi


def basis_state(dim: int, index: int) -> StateVector:
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return psi


def unitarity_residue(u: np.ndarray) -> float:
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def expm_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian h, via eigendecomposition"""
    h = 0.5 * (h + h.conj().T)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def _segment_bounds(model: HamiltonianModel, t0: float, t1: float) -> Sequence[float]:
    inner = [b for b in model.breakpoints if t0 < b < t1]
    return [t0, *inner, t1]


def _adaptive(model: HamiltonianModel, block: np.ndarray, t0: float, t1: float, cfg: IntegratorConfig) -> np.ndarray:
    t = t0
    dt = min(cfg.dt_max, t1 - t0)
    rejected = 0
    while t < t1:
        last = dt >= t1 - t
        if last:
            dt = t1 - t
        full = expm_hermitian(model.eval(t + 0.5 * dt), dt) @ block
        half = expm_hermitian(model.eval(t + 0.25 * dt), 0.5 * dt) @ block
        half = expm_hermitian(model.eval(t + 0.75 * dt), 0.5 * dt) @ half
        err = float(np.max(np.abs(full - half)))
        if err <= cfg.tol:
            block = half
            t = t1 if last else t + dt
            if err < cfg.tol / 16.0:
                dt = min(2.0 * dt, cfg.dt_max)
            continue
        rejected += 1
        dt *= 0.5
        if dt < cfg.min_dt:
            logger.error("Step size underflow at t = %.6e s (error %.3e)", t, err)
            raise IntegratorStiffnessError(
                f"Step size fell below {cfg.min_dt:.1e} s at t = {t:.6e} s",
                details={"t": t, "error": err},
            )
    if rejected:
        logger.debug("Integrator rejected %d steps on [%.3e, %.3e]", rejected, t0, t1)
    return block


def _propagate(
    model: HamiltonianModel, block: np.ndarray, t0: float, t1: float, cfg: IntegratorConfig
) -> np.ndarray:
    if t1 < t0:
        raise PhysicsDomainError(f"Cannot evolve backwards from {t0} to {t1}")
    if t1 == t0:
        return block
    if model.is_time_independent:
        return expm_hermitian(model.static, t1 - t0) @ block
    bounds = _segment_bounds(model, t0, t1)
    for start, stop in zip(bounds[:-1], bounds[1:]):
        block = _adaptive(model, block, start, stop, cfg)
    return block


def evolve(
    model: HamiltonianModel,
    psi0: StateVector,
    t_final: float,
    cfg: Optional[IntegratorConfig] = None,
    t0: float = 0.0,
) -> StateVector:
    """State at t_final starting from psi0 at t0"""
    psi0 = as_state_vector(psi0, model.dim)
    cfg = cfg or IntegratorConfig()
    return _propagate(model, psi0[:, None], t0, t_final, cfg)[:, 0]


def evolve_trajectory(
    model: HamiltonianModel,
    psi0: StateVector,
    times: Sequence[float],
    cfg: Optional[IntegratorConfig] = None,
) -> np.ndarray:
    """States at each of the sorted sample times (rows), starting from psi0 at t = 0"""
    psi = as_state_vector(psi0, model.dim)
    times = np.asarray(times, dtype=float)
    if times.size and (times[0] < 0.0 or np.any(np.diff(times) < 0.0)):
        raise PhysicsDomainError("Sample times must be sorted and non-negative")
    cfg = cfg or IntegratorConfig()
    out = np.empty((times.size, model.dim), dtype=complex)
    t_prev = 0.0
    block = psi[:, None]
    for i, t in enumerate(times):
        block = _propagate(model, block, t_prev, float(t), cfg)
        out[i] = block[:, 0]
        t_prev = float(t)
    return out


def propagator(
    model: HamiltonianModel, t_final: float, cfg: Optional[IntegratorConfig] = None, t0: float = 0.0
) -> Propagator:
    """Full unitary from t0 to t_final"""
    cfg = cfg or IntegratorConfig()
    return _propagate(model, np.eye(model.dim, dtype=complex), t0, t_final, cfg)


def rotating_frame(psi_lab: StateVector, ops: SpinOperators, omega: float, t: float) -> StateVector:
    """exp(+i s_z omega t) psi_lab"""
    m = np.real(np.diag(ops.sz))
    return np.exp(1j * m * omega * t) * np.asarray(psi_lab, dtype=complex)


def to_lab_frame(psi_rot: StateVector, ops: SpinOperators, omega: float, t: float) -> StateVector:
    """exp(-i s_z omega t) psi_rot"""
    return rotating_frame(psi_rot, ops, -omega, t)


def _check_resonance(omega: float, target: float, what: str) -> None:
    if abs(omega - target) > RESONANCE_RTOL * abs(target):
        raise OffResonanceError(
            f"Drive frequency {omega:.9e} rad/s is off the {what} resonance {target:.9e} rad/s",
            details={"omega": omega, "resonance": target},
        )


def rotating_generator(nucleus: NucleusParams, ops: SpinOperators, coeffs: EfgCoefficients, drive: DriveParams) -> np.ndarray:
    """
    Time-independent generator in the frame rotating at the drive frequency:
    3q[(C + B'E0) s_z^2 + AE({s_x,s_z} cos phi + {s_y,s_z} sin phi)] + (gamma_n B0 - omega) s_z
    """
    q = nucleus.q_tilde_hbar
    quad = 3.0 * q * (coeffs.c + coeffs.b_prime * drive.e0_static)
    amplitude = 3.0 * q * coeffs.a * drive.e_amp
    sz2 = ops.sz @ ops.sz
    drive_op = anticommutator(ops.sx, ops.sz) * math.cos(drive.phi) + anticommutator(ops.sy, ops.sz) * math.sin(drive.phi)
    detuning = nucleus.gamma_n * drive.b0 - drive.omega
    return quad * sz2 + amplitude * drive_op + detuning * ops.sz


def analytic_ner_propagator(
    nucleus: NucleusParams, ops: SpinOperators, coeffs: EfgCoefficients, drive: DriveParams, t: float
) -> Propagator:
    """
    Lab-frame propagator exp(-i s_z w t) exp(-i t H_rot) of the resonant NER drive.

    The residual (gamma_n B0 - w) s_z allowed by the resonance tolerance stays
    in H_rot, so the result is exact for h_single.
    """
    if drive.e_amp > 0.0:
        _check_resonance(drive.omega, nucleus.gamma_n * drive.b0, "Larmor")
    u_rot = expm_hermitian(rotating_generator(nucleus, ops, coeffs, drive), t)
    frame = np.exp(-1j * np.real(np.diag(ops.sz)) * drive.omega * t)
    return frame[:, None] * u_rot


def rotation_matrix(angle: float, phi: float) -> np.ndarray:
    """exp(-i angle (sigma_x cos phi + sigma_y sin phi) / 2)"""
    c, s = math.cos(0.5 * angle), math.sin(0.5 * angle)
    off = -1j * s * np.exp(-1j * phi)
    return np.array([[c, off], [-1j * s * np.exp(1j * phi), c]], dtype=complex)


def analytic_single_propagator(
    nucleus: NucleusParams, coeffs: EfgCoefficients, drive: DriveParams, t: float
) -> Propagator:
    """2x2 rotation in the subspace {S, S-1}, angle Omega_R t about (cos phi, sin phi, 0)"""
    if drive.e_amp > 0.0:
        target = resonance_omega_single(nucleus, coeffs, drive.e0_static, drive.b0)
        _check_resonance(drive.omega, target, "qubit")
    omega_r = subspace_drive_strength(nucleus, coeffs, drive.e_amp)
    return rotation_matrix(omega_r * t, drive.phi)


def embed_in_subspace(psi2: StateVector, dim: int) -> StateVector:
    psi = np.zeros(dim, dtype=complex)
    psi[:2] = psi2
    return psi


def leakage(
    model: HamiltonianModel,
    psi0_in_O: StateVector,
    t: float,
    cfg: Optional[IntegratorConfig] = None,
    reference: Optional[Propagator] = None,
    frame_omega: Optional[float] = None,
    n_samples: int = 64,
) -> LeakageReport:
    """
    Population leaving {S, S-1} after full-dimensional evolution to t.

    mean_leakage averages over n_samples equally spaced times in (0, t].
    With a 2x2 reference propagator, fidelity is |<ref|psi>|^2 of the final
    state; frame_omega converts a lab-frame model to the rotating frame first.
    """
    psi0 = as_state_vector(psi0_in_O, model.dim)
    if np.linalg.norm(psi0[2:]) > NORM_TOL:
        raise PhysicsDomainError("Initial state must lie in the qubit subspace {S, S-1}")
    times = np.linspace(0.0, t, n_samples + 1)[1:] if t > 0.0 else np.array([0.0])
    states = evolve_trajectory(model, psi0, times, cfg)
    outside = np.clip(1.0 - np.sum(np.abs(states[:, :2]) ** 2, axis=1), 0.0, 1.0)

    fidelity = None
    if reference is not None:
        final = states[-1]
        if frame_omega is not None:
            m = 0.5 * (model.dim - 1) - np.arange(model.dim)
            final = np.exp(1j * m * frame_omega * t) * final
        expected = embed_in_subspace(np.asarray(reference) @ psi0[:2], model.dim)
        fidelity = float(abs(np.vdot(expected, final)) ** 2)

    return LeakageReport(leakage=float(outside[-1]), mean_leakage=float(np.mean(outside)), fidelity=fidelity)


def _qubit_indices_two(dim: int) -> np.ndarray:
    """Tensor-basis indices of {S, S-1} x {S, S-1}"""
    return np.array([0, 1, dim, dim + 1])


def restrict_two_qubit(u: np.ndarray, dim: int) -> np.ndarray:
    idx = _qubit_indices_two(dim)
    return u[np.ix_(idx, idx)]


def qubit_rates(params: TwoQubitParams, frame_omega=None) -> Tuple[float, float]:
    """
    Static parts of the single-qubit phase rates (rad/s) in the chosen frame,
    excluding the J contribution (2S-1) pi J.

    gamma_i B0 + 3(2S-1) q_i (C_i + B'_i E_i) - omega_frame_i
    """
    w1, w2 = _frame_pair(default_frame_omega(params) if frame_omega is None else frame_omega)
    n_half = params.s.two_s - 1
    r1 = params.nucleus1.gamma_n * params.b0 + 3.0 * n_half * params.nucleus1.q_tilde_hbar * (
        params.c1 + params.b_prime1 * params.e1
    ) - w1
    r2 = params.nucleus2.gamma_n * params.b0 + 3.0 * n_half * params.nucleus2.q_tilde_hbar * (
        params.c2 + params.b_prime2 * params.e2
    ) - w2
    return r1, r2


def default_frame_omega(params: TwoQubitParams) -> float:
    """Shared frame at the idle qubit resonance of nucleus 1"""
    return params.idle_frequencies()[0]


def two_qubit_propagator_factored(
    params: TwoQubitParams, t: float, frame_omega: Union[None, float, Tuple[float, float]] = None
) -> Tuple[Propagator, Propagator, Propagator]:
    """
    (u1, u2, u12) on {S, S-1} x {S, S-1}, up to a global phase.

    u1 = exp(-i sz_half int[(2S-1)(3 q1 B'1 E1 + pi J)] dt) in the default frame,
    u2 likewise with the (gamma2 - gamma1) B0 and 3(2S-1)(q2 C2 - q1 C1)
    offsets, u12 = exp(-i sz_half (x) sz_half int 2 pi J dt).
    """
    if t < 0.0:
        raise PhysicsDomainError(f"t must be >= 0, got {t}")
    r1, r2 = qubit_rates(params, frame_omega)
    j_cycles = params.j_schedule.integral(t)
    n_half = params.s.two_s - 1
    phase1 = r1 * t + n_half * math.pi * j_cycles
    phase2 = r2 * t + n_half * math.pi * j_cycles
    sz_half = np.real(np.diag(half_spin_operators().sz))
    u1 = np.diag(np.exp(-1j * sz_half * phase1))
    u2 = np.diag(np.exp(-1j * sz_half * phase2))
    u12 = np.diag(np.exp(-1j * np.outer(sz_half, sz_half).ravel() * 2.0 * math.pi * j_cycles))
    return u1, u2, u12


def factored_unitary(params: TwoQubitParams, t: float, frame_omega=None) -> Propagator:
    u1, u2, u12 = two_qubit_propagator_factored(params, t, frame_omega)
    return np.kron(u1, u2) @ u12


def max_deviation_up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    """max |a e^{i alpha} - b| with alpha aligning the two matrices"""
    overlap = np.trace(np.asarray(a).conj().T @ np.asarray(b))
    phase = overlap / abs(overlap) if abs(overlap) > 0.0 else 1.0
    return float(np.max(np.abs(np.asarray(a) * phase - np.asarray(b))))
