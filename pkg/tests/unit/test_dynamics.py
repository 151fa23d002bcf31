#!/usr/bin/env python3
"""
Unit tests for time evolution, frames and leakage
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from nersim.core.errors import IntegratorStiffnessError, OffResonanceError, PhysicsDomainError, ShapeMismatchError
from nersim.core.physics import (
    DriveParams,
    HamiltonianModel,
    IntegratorConfig,
    analytic_ner_propagator,
    analytic_single_propagator,
    as_state_vector,
    basis_state,
    evolve,
    evolve_trajectory,
    expm_hermitian,
    factored_unitary,
    h_ner,
    h_single,
    leakage,
    max_deviation_up_to_phase,
    propagator,
    restrict_two_qubit,
    rotating_frame,
    rotating_frame_model,
    rotation_matrix,
    to_lab_frame,
    two_qubit_model,
    two_qubit_propagator_factored,
    unitarity_residue,
)
from nersim.core.physics.dynamics import default_frame_omega
from nersim.testing import toy_two_qubit_pair


def _overlap(a, b):
    return abs(np.vdot(a, b)) ** 2


class TestStates:
    """Test state validation helpers"""

    def test_basis_state(self):
        np.testing.assert_array_equal(basis_state(3, 1), [0, 1, 0])

    def test_rejects_unnormalized(self):
        with pytest.raises(PhysicsDomainError):
            as_state_vector([1.0, 1.0])

    def test_rejects_wrong_dimension(self):
        with pytest.raises(ShapeMismatchError):
            as_state_vector([1.0, 0.0], dim=3)

    def test_integrator_config_validation(self):
        with pytest.raises(PhysicsDomainError):
            IntegratorConfig(dt_max=0.0)
        with pytest.raises(PhysicsDomainError):
            IntegratorConfig(tol=-1.0)


class TestPropagation:
    """Test the exponential integrator"""

    def test_expm_hermitian_is_unitary(self):
        rng = np.random.default_rng(3)
        m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        h = m + m.conj().T
        assert unitarity_residue(expm_hermitian(h, 0.7)) < 1e-12

    def test_zero_hamiltonian(self):
        model = HamiltonianModel.constant(np.zeros((3, 3)))
        psi0 = basis_state(3, 2)
        np.testing.assert_allclose(evolve(model, psi0, 5.0), psi0)

    def test_diagonal_phases(self):
        """Test exp(-i E t) on each level of a diagonal Hamiltonian"""
        energies = np.array([1.0, -0.5])
        model = HamiltonianModel.constant(np.diag(energies))
        psi0 = np.array([1.0, 1.0]) / math.sqrt(2.0)
        psi = evolve(model, psi0, 2.0)
        np.testing.assert_allclose(psi, psi0 * np.exp(-1j * energies * 2.0), atol=1e-14)

    def test_norm_and_unitarity(self, toy_point_factory):
        point = toy_point_factory(5)
        model = h_ner(point.nucleus, point.nucleus.ops, point.coeffs, point.drive)
        cfg = IntegratorConfig(dt_max=1e-2, tol=1e-9)
        states = evolve_trajectory(model, basis_state(6, 0), np.linspace(0.0, 1.0, 5), cfg)
        np.testing.assert_allclose(np.linalg.norm(states, axis=1), 1.0, atol=1e-12)
        assert unitarity_residue(propagator(model, 0.5, cfg)) < 1e-9

    def test_trajectory_matches_single_evolve(self, toy_point_factory):
        point = toy_point_factory(3)
        model = h_ner(point.nucleus, point.nucleus.ops, point.coeffs, point.drive)
        cfg = IntegratorConfig(dt_max=1e-2, tol=1e-11)
        psi0 = basis_state(4, 0)
        states = evolve_trajectory(model, psi0, [0.3, 0.8], cfg)
        assert _overlap(states[-1], evolve(model, psi0, 0.8, cfg)) == pytest.approx(1.0, abs=1e-9)

    def test_backwards_rejected(self):
        model = HamiltonianModel.constant(np.eye(2))
        with pytest.raises(PhysicsDomainError):
            evolve(model, basis_state(2, 0), 1.0, t0=2.0)

    def test_unsorted_times_rejected(self):
        model = HamiltonianModel.constant(np.eye(2))
        with pytest.raises(PhysicsDomainError):
            evolve_trajectory(model, basis_state(2, 0), [1.0, 0.5])

    def test_step_underflow(self, toy_point_factory):
        """Test an unreachable tolerance raises instead of stalling"""
        point = toy_point_factory(3)
        model = h_ner(point.nucleus, point.nucleus.ops, point.coeffs, point.drive)
        cfg = IntegratorConfig(dt_max=1.0, tol=1e-15, min_dt=1e-2)
        with pytest.raises(IntegratorStiffnessError):
            evolve(model, basis_state(4, 0), 1.0, cfg)


class TestFrames:
    """Test rotating-frame conversions"""

    def test_identity_at_zero(self, toy_point_factory):
        ops = toy_point_factory(3).nucleus.ops
        psi = np.array([0.5, 0.5, 0.5, 0.5], dtype=complex)
        np.testing.assert_allclose(rotating_frame(psi, ops, 3.0, 0.0), psi)

    def test_round_trip(self, toy_point_factory):
        ops = toy_point_factory(7).nucleus.ops
        rng = np.random.default_rng(1)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        psi /= np.linalg.norm(psi)
        back = to_lab_frame(rotating_frame(psi, ops, 2.1, 0.9), ops, 2.1, 0.9)
        np.testing.assert_allclose(back, psi, atol=1e-14)

    def test_phase_convention(self, toy_point_factory):
        """Test the top level picks up exp(+i S w t)"""
        ops = toy_point_factory(3).nucleus.ops
        psi = rotating_frame(basis_state(4, 0), ops, 1.0, 0.5)
        assert psi[0] == pytest.approx(np.exp(1j * 1.5 * 0.5))


class TestAnalyticPropagators:
    """Test closed-form propagators against brute-force integration"""

    @pytest.mark.slow
    @pytest.mark.parametrize("two_s", [2, 3, 7])
    def test_lab_frame_matches_analytic(self, toy_point_factory, two_s):
        """Test lab-frame integration over three Rabi periods"""
        point = toy_point_factory(two_s, phi=0.3)
        ops = point.nucleus.ops
        model = h_ner(point.nucleus, ops, point.coeffs, point.drive)
        t = 3.0 * point.rabi_period
        cfg = IntegratorConfig(dt_max=1e-2, tol=1e-10)
        for index in (0, 1):
            psi0 = basis_state(ops.dim, index)
            numeric = evolve(model, psi0, t, cfg)
            exact = analytic_ner_propagator(point.nucleus, ops, point.coeffs, point.drive, t) @ psi0
            assert _overlap(exact, numeric) >= 1.0 - 1e-8

    @pytest.mark.parametrize("two_s", [2, 3, 5, 7])
    def test_rotating_frame_model_matches_analytic(self, toy_point_factory, two_s):
        """Test the constant rotating-frame generator reproduces the analytic propagator"""
        point = toy_point_factory(two_s, phi=1.1)
        ops = point.nucleus.ops
        omega = point.drive.omega
        model = rotating_frame_model(h_ner(point.nucleus, ops, point.coeffs, point.drive), ops.sz, omega)
        t = 1.7
        u_lab = np.exp(-1j * np.real(np.diag(ops.sz)) * omega * t)[:, None] * propagator(model, t)
        expected = analytic_ner_propagator(point.nucleus, ops, point.coeffs, point.drive, t)
        np.testing.assert_allclose(u_lab, expected, atol=1e-10)

    @pytest.mark.parametrize("two_s", [3, 7])
    def test_half_integer_blocks_stay_closed(self, toy_point_factory, two_s):
        """Test no population crosses between m > 0 and m < 0 over ten Rabi periods"""
        point = toy_point_factory(two_s)
        ops = point.nucleus.ops
        model = rotating_frame_model(h_ner(point.nucleus, ops, point.coeffs, point.drive), ops.sz, point.drive.omega)
        times = np.linspace(0.0, 10.0 * point.rabi_period, 41)
        states = evolve_trajectory(model, basis_state(ops.dim, 0), times)
        lower = np.sum(np.abs(states[:, ops.dim // 2:]) ** 2, axis=1)
        assert np.max(lower) < 1e-10

    def test_spin_half_only_precesses(self, toy_point_factory):
        """Test a spin-1/2 propagator is the bare frame rotation"""
        point = toy_point_factory(1)
        ops = point.nucleus.ops
        t = 0.8
        u = analytic_ner_propagator(point.nucleus, ops, point.coeffs, point.drive, t)
        expected = np.diag(np.exp(-1j * np.array([0.5, -0.5]) * point.drive.omega * t))
        np.testing.assert_allclose(u, expected, atol=1e-12)

    def test_analytic_ner_checks_larmor_resonance(self, toy_point_factory):
        point = toy_point_factory(3)
        drive = DriveParams(e_amp=1.0, omega=1.5 * point.drive.omega, b0=point.drive.b0)
        with pytest.raises(OffResonanceError):
            analytic_ner_propagator(point.nucleus, point.nucleus.ops, point.coeffs, drive, 1.0)

    def test_rotation_matrix(self):
        """Test pi about x sends |0> to -i|1> and 2 pi gives -I"""
        np.testing.assert_allclose(rotation_matrix(math.pi, 0.0) @ [1, 0], [0, -1j], atol=1e-15)
        np.testing.assert_allclose(rotation_matrix(2.0 * math.pi, 0.7), -np.eye(2), atol=1e-15)
        assert unitarity_residue(rotation_matrix(0.9, 1.3)) < 1e-15

    def test_single_propagator_pi_pulse(self, sb_point):
        """Test the Sb pi pulse lasts 730.78 us and inverts the qubit"""
        tau = math.pi / abs(sb_point.rabi_omega)
        assert tau * 1e6 == pytest.approx(730.78, abs=0.01)
        u = analytic_single_propagator(sb_point.nucleus, sb_point.coeffs, sb_point.drive, tau)
        assert abs(u[1, 0]) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_single_propagator_checks_qubit_resonance(self, toy_point_factory):
        point = toy_point_factory(3)
        with pytest.raises(OffResonanceError):
            analytic_single_propagator(point.nucleus, point.coeffs, point.drive, 1.0)

    def test_sb_full_dimension_pi_pulse(self, sb_point):
        """Test the full S = 7/2 pi pulse transfers |7/2> to |5/2>"""
        ops = sb_point.nucleus.ops
        model = rotating_frame_model(
            h_single(sb_point.nucleus, ops, sb_point.coeffs, sb_point.drive), ops.sz, sb_point.drive.omega
        )
        assert model.is_time_independent
        tau = math.pi / abs(sb_point.rabi_omega)
        psi = evolve(model, basis_state(8, 0), tau)
        assert abs(psi[1]) ** 2 >= 1.0 - 1e-6

    @pytest.mark.parametrize("fraction", [1.0, 0.5])
    def test_sb_full_dimension_matches_closed_form(self, sb_point, fraction):
        """Test the 8-level evolution stays within 1e-6 of the 2x2 rotation"""
        ops = sb_point.nucleus.ops
        model = rotating_frame_model(
            h_single(sb_point.nucleus, ops, sb_point.coeffs, sb_point.drive), ops.sz, sb_point.drive.omega
        )
        tau = fraction * math.pi / abs(sb_point.rabi_omega)
        reference = analytic_single_propagator(sb_point.nucleus, sb_point.coeffs, sb_point.drive, tau)
        report = leakage(model, basis_state(8, 0), tau, reference=reference)
        assert 1.0 - report.fidelity < 1e-6
        assert report.leakage < 1e-6
        assert report.mean_leakage < 1e-6

    @pytest.mark.parametrize("scale", [0.5, 2.0, 4.0])
    def test_rabi_frequency_linear_in_field(self, sb_point, scale):
        """Test scaling E scales the evolved Rabi frequency and divides the pi time"""
        ops = sb_point.nucleus.ops
        drive = replace(sb_point.drive, e_amp=scale * sb_point.drive.e_amp)
        model = rotating_frame_model(h_single(sb_point.nucleus, ops, sb_point.coeffs, drive), ops.sz, drive.omega)
        tau_pi = math.pi / abs(sb_point.rabi_omega)

        t = 0.1 * tau_pi
        p = abs(evolve(model, basis_state(8, 0), t)[1]) ** 2
        measured = 2.0 * math.asin(math.sqrt(p)) / t
        assert measured == pytest.approx(scale * abs(sb_point.rabi_omega), rel=1e-5)

        psi = evolve(model, basis_state(8, 0), tau_pi / scale)
        assert abs(psi[1]) ** 2 >= 1.0 - 1e-5


class TestLeakage:
    """Test leakage out of the qubit subspace"""

    def test_no_drive_no_leakage(self, toy_point_factory):
        point = toy_point_factory(5, qubit_resonance=True)
        model = h_single(point.nucleus, point.nucleus.ops, point.coeffs, DriveParams(b0=1.0))
        report = leakage(model, basis_state(6, 0), 3.0)
        assert report.leakage < 1e-14
        assert report.mean_leakage < 1e-14

    def test_spin_three_halves_is_exact(self, toy_point_factory):
        """Test the S = 3/2 qubit block is decoupled and matches the 2x2 rotation"""
        point = toy_point_factory(3, qubit_resonance=True, phi=0.4)
        ops = point.nucleus.ops
        model = rotating_frame_model(h_single(point.nucleus, ops, point.coeffs, point.drive), ops.sz, point.drive.omega)
        t = 0.5 * point.rabi_period
        reference = analytic_single_propagator(point.nucleus, point.coeffs, point.drive, t)
        report = leakage(model, basis_state(4, 0), t, reference=reference)
        assert report.mean_leakage < 1e-12
        assert report.fidelity == pytest.approx(1.0, abs=1e-10)

    def test_scales_with_drive_squared(self, toy_point_factory):
        """Test halving the drive cuts the mean S = 7/2 leakage about fourfold"""
        means = []
        for rabi_hz in (0.02, 0.01):
            point = toy_point_factory(7, rabi_hz=rabi_hz, qubit_resonance=True)
            ops = point.nucleus.ops
            model = rotating_frame_model(
                h_single(point.nucleus, ops, point.coeffs, point.drive), ops.sz, point.drive.omega
            )
            report = leakage(model, basis_state(8, 0), 4.0 * point.rabi_period, n_samples=512)
            means.append(report.mean_leakage)
        assert means[0] > 0.0
        assert 3.0 <= means[0] / means[1] <= 5.0

    def test_requires_subspace_state(self, toy_point_factory):
        point = toy_point_factory(5)
        model = h_ner(point.nucleus, point.nucleus.ops, point.coeffs, point.drive)
        with pytest.raises(PhysicsDomainError, match="qubit subspace"):
            leakage(model, basis_state(6, 3), 1.0)


class TestTwoQubitFactorization:
    """Test the factored two-nucleus propagator"""

    def test_no_coupling(self, toy_pair):
        u1, u2, u12 = two_qubit_propagator_factored(toy_pair, 1.3)
        np.testing.assert_allclose(u12, np.eye(4))

    def test_half_cycle_coupling(self):
        """Test int J dt = 1/2 cycle gives the controlled phase diag(e^-i pi/4, e^i pi/4, e^i pi/4, e^-i pi/4)"""
        pair = toy_two_qubit_pair(j_segments=((2.0, 0.25),))
        _, _, u12 = two_qubit_propagator_factored(pair, 2.0)
        phase = np.exp(-1j * math.pi / 4.0)
        np.testing.assert_allclose(np.diag(u12), [phase, phase.conjugate(), phase.conjugate(), phase], atol=1e-14)

    def test_negative_time(self, toy_pair):
        with pytest.raises(PhysicsDomainError):
            two_qubit_propagator_factored(toy_pair, -1.0)

    def test_matches_full_evolution(self):
        """Test the factored form against the full 16-level evolution with three J segments"""
        pair = toy_two_qubit_pair(j_segments=((0.7, 0.3), (0.5, -0.2), (0.9, 0.45)))
        frame = default_frame_omega(pair)
        t = pair.j_schedule.total_duration
        model = rotating_frame_model(two_qubit_model(pair), pair.total_sz(), frame)
        u_full = propagator(model, t, IntegratorConfig(dt_max=0.1, tol=1e-12))
        block = restrict_two_qubit(u_full, pair.s.dim)
        assert max_deviation_up_to_phase(factored_unitary(pair, t, frame), block) < 1e-9

    def test_per_nucleus_frames(self):
        """Test a doubly rotating frame removes both idle phases"""
        pair = toy_two_qubit_pair(e_static=0.0)
        u1, u2, _ = two_qubit_propagator_factored(pair, 2.5, pair.idle_frequencies())
        np.testing.assert_allclose(u1, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(u2, np.eye(2), atol=1e-12)

    def test_deviation_ignores_global_phase(self):
        u = rotation_matrix(0.7, 0.2)
        assert max_deviation_up_to_phase(u * np.exp(0.4j), u) < 1e-14
        assert max_deviation_up_to_phase(u, np.eye(2)) > 0.1
