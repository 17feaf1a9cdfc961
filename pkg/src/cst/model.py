"""Domain types and state constructors.

Parameter bundles (noise mixture, control weight, measurement angles, input
state) are small frozen dataclasses that validate on construction. The
constructors below turn them into concrete kets and density matrices:
Pauli operators, Bell states, the control-qubit density matrix, the
post-selection measurement basis and the teleported input state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PROB_SUM_TOL = 1e-12

_PAULI = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
for _m in _PAULI:
    _m.setflags(write=False)


def pauli(i: int) -> np.ndarray:
    """Pauli matrix by index: 0 -> I, 1 -> X, 2 -> Y, 3 -> Z.

    The returned array is shared and read-only.
    """
    if i not in (0, 1, 2, 3):
        raise ValueError(f"Pauli index must be in 0..3, got {i}")
    return _PAULI[i]


def bell_state(i: int, j: int) -> np.ndarray:
    """Bell state (|0 j> + (-1)^i |1 j+1>)/sqrt(2) as a unit 4-vector.

    Basis ordering is |ab> -> index 2a + b.
    """
    if i not in (0, 1) or j not in (0, 1):
        raise ValueError(f"Bell indices must be 0 or 1, got ({i}, {j})")
    v = np.zeros(4, dtype=complex)
    v[j] = 1.0
    v[2 + (j ^ 1)] = (-1.0) ** i
    return v / math.sqrt(2.0)


def _canonical_phi(phi: float) -> float:
    """Map an angle to [-pi, pi); -0.0 is normalized to 0.0."""
    phi = math.remainder(float(phi), 2.0 * math.pi)
    if phi == math.pi:
        phi = -math.pi
    if phi == 0.0:
        phi = 0.0
    return phi


@dataclass(frozen=True)
class NoiseSpec:
    """Pauli mixture probabilities (p0, p1, p2, p3) of one teleportation channel.

    The components must be non-negative and sum to 1 (tolerance 1e-12).
    """

    p0: float
    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        ps = (self.p0, self.p1, self.p2, self.p3)
        if any(p < 0.0 for p in ps):
            raise ValueError(f"noise probabilities must be non-negative, got {ps}")
        if abs(sum(ps) - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"noise probabilities must sum to 1, got sum {sum(ps)!r}")

    @classmethod
    def from_p(cls, p: float) -> "NoiseSpec":
        """Isotropic mixture (1-3p, p, p, p); p must lie in [0, 1/3]."""
        if not 0.0 <= p <= 1.0 / 3.0:
            raise ValueError(f"isotropic strength must lie in [0, 1/3], got {p}")
        return cls(1.0 - 3.0 * p, p, p, p)

    def as_array(self) -> np.ndarray:
        return np.array([self.p0, self.p1, self.p2, self.p3], dtype=float)


@dataclass(frozen=True)
class ControlSpec:
    """Causal-order control weight q0 in [0, 1]; q1 is always derived as 1 - q0."""

    q0: float

    def __post_init__(self):
        if not 0.0 <= self.q0 <= 1.0:
            raise ValueError(f"control weight must lie in [0, 1], got {self.q0}")

    @property
    def q1(self) -> float:
        return 1.0 - self.q0


@dataclass(frozen=True)
class MeasurementSpec:
    """Bloch angles (theta, phi) of the post-selection state on the control qubit.

    theta must lie in [0, pi]; phi is canonicalized modulo 2*pi into [-pi, pi).
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"polar angle must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "phi", _canonical_phi(self.phi))


@dataclass(frozen=True)
class PureQubit:
    """Bloch angles (theta0, phi0) of the teleported pure input state."""

    theta0: float
    phi0: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta0 <= math.pi:
            raise ValueError(f"polar angle must lie in [0, pi], got {self.theta0}")
        if not -math.pi <= self.phi0 < math.pi:
            raise ValueError(f"azimuthal angle must lie in [-pi, pi), got {self.phi0}")


def control_density(c: ControlSpec) -> np.ndarray:
    """Rank-1 projector onto sqrt(q0)|0> + sqrt(q1)|1>."""
    ket = np.array([math.sqrt(c.q0), math.sqrt(c.q1)], dtype=complex)
    return np.outer(ket, ket.conj())


def measurement_ket(m: MeasurementSpec) -> np.ndarray:
    """Post-selection ket cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>."""
    half = 0.5 * m.theta
    return np.array(
        [math.cos(half), math.sin(half) * complex(math.cos(m.phi), math.sin(m.phi))],
        dtype=complex,
    )


def measurement_ket_orthogonal(m: MeasurementSpec) -> np.ndarray:
    """Companion ket sin(theta/2)|0> - cos(theta/2) e^{i phi}|1>.

    Together with :func:`measurement_ket` this forms an orthonormal basis of
    the control qubit for every (theta, phi). Note the phase sits on |1> with
    the same sign as in the measured ket; flipping its sign would break exact
    orthogonality away from phi in {0, pi} while leaving all branch statistics
    unchanged (only the real part of the off-diagonal overlap enters them).
    """
    half = 0.5 * m.theta
    return np.array(
        [math.sin(half), -math.cos(half) * complex(math.cos(m.phi), math.sin(m.phi))],
        dtype=complex,
    )


def input_density(s: PureQubit) -> np.ndarray:
    """Density matrix of the pure input cos(theta0/2)|0> + sin(theta0/2) e^{i phi0}|1>."""
    half = 0.5 * s.theta0
    ket = np.array(
        [math.cos(half), math.sin(half) * complex(math.cos(s.phi0), math.sin(s.phi0))],
        dtype=complex,
    )
    return np.outer(ket, ket.conj())
