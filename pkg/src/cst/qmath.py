"""Dense complex-matrix helpers sized for 2x2 and 4x4 (system (x) control) objects.

A matrix here is a plain row-major complex numpy array. Operations validate
dimensions at their boundaries, return fresh arrays, and never modify an
argument in place. The tensor ordering is fixed once and for all: the system
qubit is the first factor, the control qubit the second, so a 4x4 operator
carries indices (system, control) x (system, control).
"""

from __future__ import annotations

import numpy as np

ATOL = 1e-10
"""Default absolute tolerance for matrix property checks."""

UNIT_NORM_TOL = 1e-12
"""Maximum allowed deviation of a projection ket from unit norm."""


def cmatrix(entries) -> np.ndarray:
    """Coerce ``entries`` to a 2-D complex matrix, rejecting malformed input."""
    a = np.array(entries, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    return a


def matmul(a, b) -> np.ndarray:
    """Matrix product a @ b with an explicit inner-dimension check."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("matmul expects 2-D matrices")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product; accepts matrices or kets, dimensions multiply."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError("dagger expects a 2-D matrix")
    return a.conj().T


def trace(a) -> complex:
    """Sum of diagonal entries of a square matrix."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"trace expects a square matrix, got shape {a.shape}")
    return complex(np.trace(a))


def inner_project_control(big, m) -> np.ndarray:
    """Project the control factor of a 4x4 operator onto the unit ket ``m``.

    Returns the 2x2 system operator (I (x) <m|) big (I (x) |m>); the result is
    unnormalized in general. ``m`` must be a 2-vector with unit norm (deviation
    above 1e-12 is rejected).
    """
    big = np.asarray(big, dtype=complex)
    if big.shape != (4, 4):
        raise ValueError(f"expected a 4x4 operator, got shape {big.shape}")
    m = np.asarray(m, dtype=complex).reshape(-1)
    if m.shape != (2,):
        raise ValueError(f"expected a control ket of length 2, got shape {m.shape}")
    if abs(np.linalg.norm(m) - 1.0) > UNIT_NORM_TOL:
        raise ValueError(f"control ket is not unit norm: |m| = {np.linalg.norm(m)!r}")
    big4 = big.reshape(2, 2, 2, 2)
    return np.einsum("c,icjd,d->ij", m.conj(), big4, m)


def ptrace_control(big) -> np.ndarray:
    """Partial trace over the control factor of a 4x4 operator."""
    big = np.asarray(big, dtype=complex)
    if big.shape != (4, 4):
        raise ValueError(f"expected a 4x4 operator, got shape {big.shape}")
    return np.einsum("icjc->ij", big.reshape(2, 2, 2, 2))


def is_hermitian(a, atol: float = ATOL) -> bool:
    a = np.asarray(a, dtype=complex)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and bool(
        np.max(np.abs(a - a.conj().T)) <= atol)


def check_density(rho, atol: float = ATOL) -> np.ndarray:
    """Validate that ``rho`` is a 2x2 Hermitian unit-trace matrix and return it."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 density matrix, got shape {rho.shape}")
    if not is_hermitian(rho, atol):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > atol:
        raise ValueError(f"density matrix trace is {np.trace(rho)!r}, expected 1")
    return rho


def min_eigenvalue(a) -> float:
    """Smallest eigenvalue of a Hermitian matrix (positivity checks)."""
    a = np.asarray(a, dtype=complex)
    if not is_hermitian(a, atol=1e-8):
        raise ValueError("min_eigenvalue expects a Hermitian matrix")
    return float(np.linalg.eigvalsh(a)[0])
