#!/usr/bin/env python3
"""
Nuclear spin Hamiltonians in angular-frequency units (H / hbar, rad/s).

All operators act on the dimensionless spin matrices from nersim.core.spin;
the quadrupole coupling enters through q_tilde_hbar = e Q / (2S(2S-1) hbar).
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from ..atomic.efg import EfgCoefficients, EfgTensor
from ..constants import CODATA, PhysicalConstants
from ..errors import PhysicsDomainError, ShapeMismatchError
from ..spin import SpinOperators, SpinQuantum, anticommutator, make_spin_operators, two_spin_embed

logger = logging.getLogger(__name__)

AXES = ("x", "y", "z")


@dataclass(frozen=True)
class NucleusParams:
    """Spin, quadrupole moment Q (m^2) and gyromagnetic ratio (rad s^-1 T^-1)"""

    s: SpinQuantum
    q_moment: float = 0.0
    gamma_n: float = 0.0
    constants: PhysicalConstants = field(default=CODATA, repr=False)

    def __post_init__(self):
        if not isinstance(self.s, SpinQuantum):
            object.__setattr__(self, "s", SpinQuantum.parse(self.s))
        if self.s.two_s == 1 and self.q_moment != 0.0:
            raise PhysicsDomainError("A spin-1/2 nucleus has no quadrupole moment; q_moment must be 0")
        if not (math.isfinite(self.q_moment) and math.isfinite(self.gamma_n)):
            raise PhysicsDomainError("Nucleus parameters must be finite")

    @property
    def q_tilde_hbar(self) -> float:
        """e Q / (2S(2S-1) hbar), rad s^-1 per V m^-2; zero for S = 1/2"""
        two_s = self.s.two_s
        if two_s == 1:
            return 0.0
        return self.constants.e_charge * self.q_moment / (two_s * (two_s - 1) * self.constants.hbar)

    @property
    def ops(self) -> SpinOperators:
        return make_spin_operators(self.s)


@dataclass(frozen=True)
class DriveParams:
    """Electric drive: amplitude E (V/m), frequency, phase, static field E0 (V/m) and B0 (T)"""

    e_amp: float = 0.0
    omega: float = 0.0
    phi: float = 0.0
    e0_static: float = 0.0
    b0: float = 0.0

    def __post_init__(self):
        if self.e_amp < 0.0:
            raise PhysicsDomainError(f"Drive amplitude must be >= 0, got {self.e_amp}")
        if self.e_amp > 0.0 and not self.omega > 0.0:
            raise PhysicsDomainError(f"Drive frequency must be > 0 when driving, got {self.omega}")


@dataclass(frozen=True)
class HamiltonianModel:
    """
    Time-parameterized Hermitian generator H(t)/hbar.

    ``static`` is set when the generator does not depend on time; ``breakpoints``
    lists times where H(t) jumps, which integrators never step across.
    ``degenerate_drive`` marks a requested drive that cannot act on the spin
    (S = 1/2 has no quadrupole coupling).
    """

    dim: int
    generator: Callable[[float], np.ndarray]
    static: Optional[np.ndarray] = None
    breakpoints: Tuple[float, ...] = ()
    drive_omega: Optional[float] = None
    label: str = ""
    degenerate_drive: bool = False

    @classmethod
    def constant(cls, matrix: np.ndarray, label: str = "") -> "HamiltonianModel":
        matrix = np.array(matrix, dtype=complex)
        matrix.setflags(write=False)
        return cls(dim=matrix.shape[0], generator=lambda t: matrix, static=matrix, label=label)

    @property
    def is_time_independent(self) -> bool:
        return self.static is not None

    def eval(self, t: float) -> np.ndarray:
        if self.static is not None:
            return self.static
        return self.generator(float(t))


def _check_ops(nucleus: NucleusParams, ops: SpinOperators) -> None:
    if ops.s != nucleus.s:
        raise ShapeMismatchError(
            f"Spin operators for S={ops.s.label()} do not match nucleus S={nucleus.s.label()}"
        )


def h_quadrupole(nucleus: NucleusParams, ops: SpinOperators, g: EfgTensor) -> np.ndarray:
    """-(1/2) q_tilde_hbar sum_ab g_ab {s_a, s_b}"""
    _check_ops(nucleus, ops)
    q = nucleus.q_tilde_hbar
    h = np.zeros((ops.dim, ops.dim), dtype=complex)
    if q == 0.0:
        return h
    spins = (ops.sx, ops.sy, ops.sz)
    for a in range(3):
        for b in range(3):
            if g.g[a, b] != 0.0:
                h += g.g[a, b] * anticommutator(spins[a], spins[b])
    return -0.5 * q * h


def h_total(nucleus: NucleusParams, ops: SpinOperators, b_field: Sequence[float], g: EfgTensor) -> np.ndarray:
    """Zeeman term gamma_n B.s plus the quadrupole interaction"""
    _check_ops(nucleus, ops)
    bx, by, bz = (float(v) for v in b_field)
    zeeman = nucleus.gamma_n * (bx * ops.sx + by * ops.sy + bz * ops.sz)
    return zeeman + h_quadrupole(nucleus, ops, g)


def h_lqse(nucleus: NucleusParams, ops: SpinOperators, coeffs: EfgCoefficients, e0: float, b0: float) -> np.ndarray:
    """gamma_n B0 s_z + 3 q_tilde_hbar (C + B' E0) s_z^2, diagonal in m"""
    _check_ops(nucleus, ops)
    m = ops.s.m_values
    quad = 3.0 * nucleus.q_tilde_hbar * (coeffs.c + coeffs.b_prime * e0)
    return np.diag(nucleus.gamma_n * b0 * m + quad * m ** 2).astype(complex)


def resonance_omega_single(nucleus: NucleusParams, coeffs: EfgCoefficients, e0: float = 0.0, b0: float = 0.0) -> float:
    """Gap between m = S and m = S-1: gamma_n B0 + 3(2S-1) q_tilde_hbar (C + B' E0)"""
    return nucleus.gamma_n * b0 + 3.0 * (nucleus.s.two_s - 1) * nucleus.q_tilde_hbar * (
        coeffs.c + coeffs.b_prime * e0
    )


def subspace_drive_strength(nucleus: NucleusParams, coeffs: EfgCoefficients, e_amp: float) -> float:
    """Signed Rabi angular frequency in the qubit subspace, 3 sqrt(2S)(2S-1) q_tilde_hbar A E"""
    two_s = nucleus.s.two_s
    return 3.0 * math.sqrt(two_s) * (two_s - 1) * nucleus.q_tilde_hbar * coeffs.a * e_amp


def h_single(
    nucleus: NucleusParams,
    ops: SpinOperators,
    coeffs: EfgCoefficients,
    drive: DriveParams,
    keep_dc_terms: bool = False,
) -> HamiltonianModel:
    """
    Static LQSE splitting plus the circularly polarized quadrupole drive.

    H(t) = gamma_n B0 s_z + 3q(C + B'E0) s_z^2
           + 3qAE [{s_x,s_z} cos(wt + phi) + {s_y,s_z} sin(wt + phi)]

    With keep_dc_terms the constant remnant of the integrated field,
    -3qAE [{s_x,s_z} cos(phi) + {s_y,s_z} sin(phi)], is kept as well.
    """
    _check_ops(nucleus, ops)
    static = h_lqse(nucleus, ops, coeffs, drive.e0_static, drive.b0)
    amplitude = 3.0 * nucleus.q_tilde_hbar * coeffs.a * drive.e_amp

    degenerate = nucleus.s.two_s == 1 and drive.e_amp > 0.0
    if degenerate:
        logger.warning("Spin-1/2 nucleus: the quadrupole drive vanishes, no NER is possible")

    if amplitude == 0.0:
        return replace(HamiltonianModel.constant(static, label="h_single"), degenerate_drive=degenerate)

    x_drive = anticommutator(ops.sx, ops.sz)
    y_drive = anticommutator(ops.sy, ops.sz)
    omega, phi = drive.omega, drive.phi
    dc = -amplitude * (x_drive * math.cos(phi) + y_drive * math.sin(phi)) if keep_dc_terms else 0.0

    def generator(t: float) -> np.ndarray:
        angle = omega * t + phi
        return static + amplitude * (x_drive * math.cos(angle) + y_drive * math.sin(angle)) + dc

    return HamiltonianModel(
        dim=ops.dim,
        generator=generator,
        drive_omega=None if keep_dc_terms else omega,
        label="h_single",
    )


def h_ner(
    nucleus: NucleusParams,
    ops: SpinOperators,
    coeffs: EfgCoefficients,
    drive: DriveParams,
    keep_dc_terms: bool = False,
) -> HamiltonianModel:
    """Pure oscillating-field NER Hamiltonian (no static field E0)"""
    if drive.e0_static != 0.0:
        raise PhysicsDomainError("h_ner takes no static field; use h_single for E0 != 0")
    model = h_single(nucleus, ops, coeffs, drive, keep_dc_terms)
    return replace(model, label="h_ner")


def rotating_frame_model(model: HamiltonianModel, sz: np.ndarray, omega: float) -> HamiltonianModel:
    """
    Generator seen in the frame rotating at omega about z: R^dag H R - omega s_z.

    R(t) = exp(-i s_z omega t) with s_z diagonal (a single spin or a sum over
    spins). A drive co-rotating at omega gives a time-independent result.
    """
    sz = np.asarray(sz)
    if sz.shape != (model.dim, model.dim):
        raise ShapeMismatchError(f"s_z shape {sz.shape} does not match model dimension {model.dim}")
    m = np.real(np.diag(sz))
    offset = omega * np.diag(m).astype(complex)

    def generator(t: float) -> np.ndarray:
        phases = np.exp(1j * m * omega * t)
        return phases[:, None] * model.eval(t) * phases.conj()[None, :] - offset

    if model.is_time_independent and np.allclose(model.static, np.diag(np.diag(model.static))):
        return replace(
            HamiltonianModel.constant(model.static - offset, label=f"{model.label}_rot"),
            degenerate_drive=model.degenerate_drive,
        )
    if model.drive_omega is not None and model.drive_omega == omega:
        return replace(
            HamiltonianModel.constant(generator(0.0), label=f"{model.label}_rot"),
            degenerate_drive=model.degenerate_drive,
        )
    return HamiltonianModel(
        dim=model.dim,
        generator=generator,
        breakpoints=model.breakpoints,
        label=f"{model.label}_rot",
        degenerate_drive=model.degenerate_drive,
    )


@dataclass(frozen=True)
class JSchedule:
    """Piecewise-constant J(t) in Hz: ordered (duration_s, J_Hz) segments from t = 0, zero afterwards"""

    segments: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        cleaned = []
        for duration, j_hz in self.segments:
            if duration < 0.0:
                raise PhysicsDomainError(f"J segment duration must be >= 0, got {duration}")
            cleaned.append((float(duration), float(j_hz)))
        object.__setattr__(self, "segments", tuple(cleaned))

    @classmethod
    def constant(cls, j_hz: float, duration: float) -> "JSchedule":
        return cls(((duration, j_hz),))

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        return tuple(np.cumsum([d for d, _ in self.segments]).tolist())

    @property
    def total_duration(self) -> float:
        return float(sum(d for d, _ in self.segments))

    def value(self, t: float) -> float:
        start = 0.0
        for duration, j_hz in self.segments:
            if start <= t < start + duration:
                return j_hz
            start += duration
        return 0.0

    def integral(self, t: float) -> float:
        """int_0^t J dt' in cycles"""
        total, start = 0.0, 0.0
        for duration, j_hz in self.segments:
            if t <= start:
                break
            total += j_hz * (min(t, start + duration) - start)
            start += duration
        return total


@dataclass(frozen=True)
class TwoQubitParams:
    """
    Two nuclei of equal spin coupled by J(t) s1z s2z.

    c_i in V m^-2, b_prime_i and a_i in m^-1, static fields e_i and the
    transverse drive amplitude e_drive in V/m, b0 in T.
    """

    nucleus1: NucleusParams
    nucleus2: NucleusParams
    c1: float = 0.0
    c2: float = 0.0
    b_prime1: float = 0.0
    b_prime2: float = 0.0
    e1: float = 0.0
    e2: float = 0.0
    j_schedule: JSchedule = field(default_factory=JSchedule)
    b0: float = 0.0
    a1: float = 0.0
    a2: float = 0.0
    e_drive: float = 0.0

    def __post_init__(self):
        if self.nucleus1.s != self.nucleus2.s:
            raise ShapeMismatchError(
                f"Both nuclei must share one spin, got {self.nucleus1.s.label()} and {self.nucleus2.s.label()}"
            )

    @property
    def s(self) -> SpinQuantum:
        return self.nucleus1.s

    @property
    def coeffs1(self) -> EfgCoefficients:
        return EfgCoefficients(a=self.a1, c=self.c1, b_prime=self.b_prime1)

    @property
    def coeffs2(self) -> EfgCoefficients:
        return EfgCoefficients(a=self.a2, c=self.c2, b_prime=self.b_prime2)

    def idle_frequencies(self) -> Tuple[float, float]:
        """Qubit resonance of each nucleus with its static field off"""
        return (
            resonance_omega_single(self.nucleus1, self.coeffs1, 0.0, self.b0),
            resonance_omega_single(self.nucleus2, self.coeffs2, 0.0, self.b0),
        )

    def total_sz(self) -> np.ndarray:
        ops = make_spin_operators(self.s)
        eye = ops.identity
        return two_spin_embed(ops.sz, eye) + two_spin_embed(eye, ops.sz)

    def frame_sz(self, frame_omega) -> np.ndarray:
        """omega_1 s1z + omega_2 s2z for a shared or per-nucleus frame frequency"""
        w1, w2 = _frame_pair(frame_omega)
        ops = make_spin_operators(self.s)
        eye = ops.identity
        return w1 * two_spin_embed(ops.sz, eye) + w2 * two_spin_embed(eye, ops.sz)


def _frame_pair(frame_omega) -> Tuple[float, float]:
    if np.ndim(frame_omega) == 0:
        return float(frame_omega), float(frame_omega)
    w1, w2 = frame_omega
    return float(w1), float(w2)


def h_two(params: TwoQubitParams, t: float) -> np.ndarray:
    """
    Diagonal two-nucleus Hamiltonian with the J(t) s1z s2z coupling.

    Nucleus 1 is the slow tensor index.
    """
    ops = make_spin_operators(params.s)
    eye = ops.identity
    h1 = h_lqse(params.nucleus1, ops, params.coeffs1, params.e1, params.b0)
    h2 = h_lqse(params.nucleus2, ops, params.coeffs2, params.e2, params.b0)
    coupling = 2.0 * math.pi * params.j_schedule.value(t)
    return two_spin_embed(h1, eye) + two_spin_embed(eye, h2) + coupling * two_spin_embed(ops.sz, ops.sz)


def two_qubit_model(params: TwoQubitParams) -> HamiltonianModel:
    if not params.j_schedule.segments:
        return HamiltonianModel.constant(h_two(params, 0.0), label="h_two")
    return HamiltonianModel(
        dim=params.s.dim ** 2,
        generator=lambda t: h_two(params, t),
        breakpoints=params.j_schedule.breakpoints,
        label="h_two",
    )
