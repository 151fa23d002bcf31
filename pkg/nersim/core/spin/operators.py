#!/usr/bin/env python3
"""
Spin operator algebra for arbitrary nuclear spin S.

Matrices are dimensionless (operators divided by hbar) and written in the s_z
eigenbasis ordered m = S, S-1, ..., -S, so the qubit subspace {S, S-1} is the
top-left 2x2 block of every operator.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np

from ..errors import PhysicsDomainError, ShapeMismatchError

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class SpinQuantum:
    """Spin quantum number stored as the integer 2S"""

    two_s: int

    def __post_init__(self):
        if isinstance(self.two_s, bool) or not isinstance(self.two_s, (int, np.integer)):
            raise PhysicsDomainError(f"two_s must be an integer, got {self.two_s!r}")
        if self.two_s < 1:
            raise PhysicsDomainError(f"two_s must be >= 1, got {self.two_s}")
        object.__setattr__(self, "two_s", int(self.two_s))

    @classmethod
    def parse(cls, text: Union[str, int]) -> "SpinQuantum":
        """Parse "7/2"-style or integer spin text"""
        if isinstance(text, bool):
            raise PhysicsDomainError(f"Invalid spin {text!r}")
        try:
            value = Fraction(str(text).strip())
        except (ValueError, ZeroDivisionError):
            raise PhysicsDomainError(f"Invalid spin {text!r}; expected e.g. '7/2' or '1'")
        doubled = 2 * value
        if doubled.denominator != 1:
            raise PhysicsDomainError(f"Spin {text!r} is not an integer or half-integer")
        return cls(int(doubled))

    @property
    def s(self) -> float:
        return self.two_s / 2.0

    @property
    def dim(self) -> int:
        return self.two_s + 1

    @property
    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers in basis order (descending)"""
        return self.s - np.arange(self.dim)

    @property
    def is_half_integer(self) -> bool:
        return self.two_s % 2 == 1

    def label(self) -> str:
        return str(self.two_s // 2) if self.two_s % 2 == 0 else f"{self.two_s}/2"

    def m_label(self, index: int) -> str:
        """Text form of the m value at a basis index ("5/2", "-1/2", "0")"""
        two_m = self.two_s - 2 * index
        return str(two_m // 2) if two_m % 2 == 0 else f"{two_m}/2"


@dataclass(frozen=True)
class SpinOperators:
    """Cartesian spin matrices for one spin quantum number"""

    s: SpinQuantum
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray

    @property
    def dim(self) -> int:
        return self.s.dim

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def casimir(self) -> np.ndarray:
        return self.sx @ self.sx + self.sy @ self.sy + self.sz @ self.sz


@dataclass(frozen=True)
class QubitProjection:
    """Spin operators projected onto the subspace {S, S-1}"""

    s: SpinQuantum
    px: np.ndarray
    py: np.ndarray
    pz: np.ndarray
    shift: float


def _frozen(matrix: np.ndarray) -> np.ndarray:
    matrix = np.ascontiguousarray(matrix, dtype=complex)
    matrix.setflags(write=False)
    return matrix


@lru_cache(maxsize=None)
def make_spin_operators(s: SpinQuantum) -> SpinOperators:
    """
    Build s_x, s_y, s_z from the raising operator.

    <m+1|S+|m> = sqrt(S(S+1) - m(m+1)), placed on the first superdiagonal
    because the basis runs from m = S downwards.
    """
    if not isinstance(s, SpinQuantum):
        raise PhysicsDomainError(f"Expected SpinQuantum, got {type(s).__name__}")
    spin = s.s
    m = s.m_values
    ladder = np.sqrt(spin * (spin + 1.0) - m[1:] * (m[1:] + 1.0))
    s_plus = np.diag(ladder, k=1).astype(complex)
    s_minus = s_plus.conj().T
    sx = 0.5 * (s_plus + s_minus)
    sy = -0.5j * (s_plus - s_minus)
    sz = np.diag(m).astype(complex)
    return SpinOperators(s=s, sx=_frozen(sx), sy=_frozen(sy), sz=_frozen(sz))


def half_spin_operators() -> SpinOperators:
    return make_spin_operators(SpinQuantum(1))


def _require_square(*matrices: np.ndarray) -> None:
    for matrix in matrices:
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ShapeMismatchError(f"Expected a square matrix, got shape {matrix.shape}")


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """ab + ba"""
    a = np.asarray(a)
    b = np.asarray(b)
    _require_square(a, b)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"Dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b + b @ a


def project_to_subspace(matrix: np.ndarray) -> np.ndarray:
    """Top-left 2x2 block, i.e. the operator restricted to m in {S, S-1}"""
    matrix = np.asarray(matrix)
    _require_square(matrix)
    if matrix.shape[0] < 2:
        raise ShapeMismatchError("Operator has no two-level subspace")
    return np.array(matrix[:2, :2], dtype=complex)


def project_subspace_O(s: SpinQuantum) -> QubitProjection:
    """
    Projection of the spin operators onto the qubit subspace {S, S-1}.

    px = sqrt(2S) sx^(1/2), py = sqrt(2S) sy^(1/2), pz = sz^(1/2) + (2S-1)/2.
    S = 1/2 is accepted and gives the trivial projection with zero shift.
    """
    half = half_spin_operators()
    scale = np.sqrt(s.two_s)
    shift = (s.two_s - 1) / 2.0
    return QubitProjection(
        s=s,
        px=_frozen(scale * half.sx),
        py=_frozen(scale * half.sy),
        pz=_frozen(half.sz + shift * np.eye(2)),
        shift=shift,
    )


def two_spin_embed(op1: np.ndarray, op2: np.ndarray) -> np.ndarray:
    """Tensor product op1 (x) op2, nucleus 1 as the slow index"""
    op1 = np.asarray(op1)
    op2 = np.asarray(op2)
    _require_square(op1, op2)
    return np.kron(op1, op2)


def is_hermitian(matrix: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    matrix = np.asarray(matrix)
    return bool(np.max(np.abs(matrix - matrix.conj().T), initial=0.0) <= tol)
