#!/usr/bin/env python3
"""
Unit tests for the spin operator algebra
"""

import math

import numpy as np
import pytest

from nersim.core.errors import PhysicsDomainError, ShapeMismatchError
from nersim.core.spin import (
    SpinQuantum,
    anticommutator,
    is_hermitian,
    make_spin_operators,
    project_subspace_O,
    project_to_subspace,
    two_spin_embed,
)

ALL_SPINS = list(range(1, 8))


class TestSpinQuantum:
    """Test parsing and labelling of spin quantum numbers"""

    @pytest.mark.parametrize("text,two_s", [("1/2", 1), ("7/2", 7), ("1", 2), (3, 6), (" 3/2 ", 3)])
    def test_parse(self, text, two_s):
        """Test fraction and integer spellings"""
        assert SpinQuantum.parse(text).two_s == two_s

    @pytest.mark.parametrize("text", ["0", "1/3", "abc", "-1/2", "", True])
    def test_parse_rejects_invalid(self, text):
        """Test zero, negative, non-half-integer and garbage spins are rejected"""
        with pytest.raises(PhysicsDomainError):
            SpinQuantum.parse(text)

    def test_labels(self):
        """Test spin and m labels follow the descending basis"""
        s = SpinQuantum(7)
        assert s.label() == "7/2"
        assert s.dim == 8
        assert s.m_label(0) == "7/2"
        assert s.m_label(3) == "1/2"
        assert s.m_label(7) == "-7/2"
        assert SpinQuantum(2).label() == "1"
        assert SpinQuantum(2).m_label(1) == "0"

    def test_m_values_descending(self):
        """Test basis order runs from S down to -S"""
        np.testing.assert_allclose(SpinQuantum(3).m_values, [1.5, 0.5, -0.5, -1.5])

    def test_half_integer_flag(self):
        assert SpinQuantum(7).is_half_integer
        assert not SpinQuantum(2).is_half_integer


class TestSpinOperators:
    """Test the Cartesian spin matrices"""

    def test_pauli_for_half(self):
        """Test S = 1/2 reproduces sigma / 2"""
        ops = make_spin_operators(SpinQuantum(1))
        np.testing.assert_allclose(ops.sx, 0.5 * np.array([[0, 1], [1, 0]]))
        np.testing.assert_allclose(ops.sy, 0.5 * np.array([[0, -1j], [1j, 0]]))
        np.testing.assert_allclose(ops.sz, 0.5 * np.diag([1, -1]))

    def test_spin_one_ladder_element(self):
        """Test <1|s_x|0> = 1/sqrt(2) for S = 1"""
        ops = make_spin_operators(SpinQuantum(2))
        assert ops.sx[0, 1] == pytest.approx(1.0 / math.sqrt(2.0))
        assert ops.sx[1, 2] == pytest.approx(1.0 / math.sqrt(2.0))

    @pytest.mark.parametrize("two_s", ALL_SPINS)
    def test_casimir(self, two_s):
        """Test s^2 = S(S+1) I"""
        ops = make_spin_operators(SpinQuantum(two_s))
        s = two_s / 2.0
        np.testing.assert_allclose(ops.casimir(), s * (s + 1.0) * np.eye(two_s + 1), atol=1e-12)

    @pytest.mark.parametrize("two_s", ALL_SPINS)
    def test_commutation_relations(self, two_s):
        """Test [s_x, s_y] = i s_z and cyclic"""
        ops = make_spin_operators(SpinQuantum(two_s))
        np.testing.assert_allclose(ops.sx @ ops.sy - ops.sy @ ops.sx, 1j * ops.sz, atol=1e-12)
        np.testing.assert_allclose(ops.sy @ ops.sz - ops.sz @ ops.sy, 1j * ops.sx, atol=1e-12)
        np.testing.assert_allclose(ops.sz @ ops.sx - ops.sx @ ops.sz, 1j * ops.sy, atol=1e-12)

    @pytest.mark.parametrize("two_s", ALL_SPINS)
    def test_hermitian(self, two_s):
        ops = make_spin_operators(SpinQuantum(two_s))
        assert is_hermitian(ops.sx)
        assert is_hermitian(ops.sy)
        assert is_hermitian(ops.sz)

    def test_operators_are_read_only_and_cached(self):
        """Test the cached matrices cannot be mutated"""
        ops = make_spin_operators(SpinQuantum(3))
        assert make_spin_operators(SpinQuantum(3)) is ops
        with pytest.raises(ValueError):
            ops.sx[0, 0] = 1.0

    def test_rejects_non_spin(self):
        with pytest.raises(PhysicsDomainError):
            make_spin_operators(3)


class TestAnticommutator:
    """Test the quadrupole drive operators {s_x, s_z} and {s_y, s_z}"""

    def test_vanishes_for_half(self):
        """Test Pauli matrices anticommute"""
        ops = make_spin_operators(SpinQuantum(1))
        np.testing.assert_allclose(anticommutator(ops.sx, ops.sz), np.zeros((2, 2)), atol=1e-15)
        np.testing.assert_allclose(anticommutator(ops.sy, ops.sz), np.zeros((2, 2)), atol=1e-15)

    def test_spin_three_halves_elements(self):
        """Test <3/2|{s_x,s_z}|1/2> = sqrt(3) and <1/2|{s_x,s_z}|-1/2> = 0"""
        ops = make_spin_operators(SpinQuantum(3))
        x_drive = anticommutator(ops.sx, ops.sz)
        assert x_drive[0, 1] == pytest.approx(math.sqrt(3.0))
        assert abs(x_drive[1, 2]) < 1e-15

    @pytest.mark.parametrize("two_s", [3, 5, 7])
    def test_no_coupling_across_zero_for_half_integer(self, two_s):
        """Test entries with m_i + m_j = 0 vanish"""
        s = SpinQuantum(two_s)
        ops = make_spin_operators(s)
        m = s.m_values
        for drive in (anticommutator(ops.sx, ops.sz), anticommutator(ops.sy, ops.sz)):
            for i in range(s.dim):
                for j in range(s.dim):
                    if m[i] + m[j] == 0.0:
                        assert abs(drive[i, j]) < 1e-15

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            anticommutator(np.eye(2), np.eye(3))

    def test_non_square(self):
        with pytest.raises(ShapeMismatchError):
            anticommutator(np.ones((2, 3)), np.ones((2, 3)))


class TestSubspaceProjection:
    """Test projection onto the qubit subspace {S, S-1}"""

    @pytest.mark.parametrize("two_s,shift", [(1, 0.0), (3, 1.0), (7, 3.0)])
    def test_shift(self, two_s, shift):
        """Test the z offset (2S-1)/2"""
        assert project_subspace_O(SpinQuantum(two_s)).shift == shift

    def test_spin_three_halves(self):
        """Test px = sqrt(3) sigma_x / 2"""
        proj = project_subspace_O(SpinQuantum(3))
        np.testing.assert_allclose(proj.px, math.sqrt(3.0) * 0.5 * np.array([[0, 1], [1, 0]]))
        np.testing.assert_allclose(proj.pz, np.diag([1.5, 0.5]))

    @pytest.mark.parametrize("two_s", ALL_SPINS)
    def test_matches_operator_blocks(self, two_s):
        """Test the projection equals the top-left block of each operator"""
        s = SpinQuantum(two_s)
        ops = make_spin_operators(s)
        proj = project_subspace_O(s)
        np.testing.assert_allclose(proj.px, project_to_subspace(ops.sx), atol=1e-14)
        np.testing.assert_allclose(proj.py, project_to_subspace(ops.sy), atol=1e-14)
        np.testing.assert_allclose(proj.pz, project_to_subspace(ops.sz), atol=1e-14)

    def test_project_needs_two_levels(self):
        with pytest.raises(ShapeMismatchError):
            project_to_subspace(np.eye(1))


class TestTwoSpinEmbed:
    """Test tensor embedding with nucleus 1 as the slow index"""

    def test_sz_embeddings(self):
        """Test diagonals of s_z (x) I and I (x) s_z"""
        ops = make_spin_operators(SpinQuantum(1))
        eye = ops.identity
        np.testing.assert_allclose(np.diag(two_spin_embed(ops.sz, eye)).real, [0.5, 0.5, -0.5, -0.5])
        np.testing.assert_allclose(np.diag(two_spin_embed(eye, ops.sz)).real, [0.5, -0.5, 0.5, -0.5])

    def test_zz_coupling_diagonal(self):
        ops = make_spin_operators(SpinQuantum(1))
        np.testing.assert_allclose(np.diag(two_spin_embed(ops.sz, ops.sz)).real, [0.25, -0.25, -0.25, 0.25])

    def test_dimension(self):
        ops = make_spin_operators(SpinQuantum(3))
        assert two_spin_embed(ops.sx, ops.sz).shape == (16, 16)
