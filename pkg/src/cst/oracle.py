"""Brute-force ground truth for the causal-order switch.

Nothing here knows the closed forms: the switch is represented by its sixteen
explicit 4x4 Kraus operators on system (x) control,

    W_ij = (K_i K_j) (x) |0><0|  +  (K_j K_i) (x) |1><1|,      K_i = sqrt(p_i) s_i,

applied to rho (x) rho_c, after which the control factor is projected onto the
measurement ket. Every closed form in :mod:`cst.analytic` is validated against
this route, and the tests for the derived constants were frozen from it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmath
from .analytic import TeleportResult, _result
from .model import (
    ControlSpec,
    MeasurementSpec,
    NoiseSpec,
    PureQubit,
    control_density,
    input_density,
    measurement_ket,
    measurement_ket_orthogonal,
    pauli,
)

_P00 = np.array([[1, 0], [0, 0]], dtype=complex)
_P11 = np.array([[0, 0], [0, 1]], dtype=complex)


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators of one channel; weights are carried in the operator norms."""

    operators: tuple[np.ndarray, ...]

    def completeness_defect(self) -> float:
        """Max-norm deviation of sum(K^dag K) from the identity."""
        dim = self.operators[0].shape[0]
        acc = np.zeros((dim, dim), dtype=complex)
        for k in self.operators:
            acc += k.conj().T @ k
        return float(np.max(np.abs(acc - np.eye(dim))))


def kraus_from_noise(n: NoiseSpec) -> KrausSet:
    """Kraus operators sqrt(p_i) s_i of one teleportation channel.

    Zero-weight operators are retained; they are harmless.
    """
    ps = n.as_array()
    return KrausSet(tuple(np.sqrt(ps[i]) * pauli(i) for i in range(4)))


def single_channel(n: NoiseSpec, rho) -> np.ndarray:
    """One pass through the channel: sum_i p_i s_i rho s_i (trace preserving)."""
    rho = qmath.check_density(rho)
    ps = n.as_array()
    out = np.zeros((2, 2), dtype=complex)
    for i in range(4):
        s = pauli(i)
        out += ps[i] * (s @ rho @ s)
    return out


def switch_kraus(n: NoiseSpec, second: NoiseSpec | None = None) -> list[np.ndarray]:
    """The sixteen 4x4 switch Kraus operators.

    ``n`` is the channel applied first when the control is |0>; ``second``
    (defaulting to ``n``, the shared-noise case) is applied first when the
    control is |1>.
    """
    first_ops = kraus_from_noise(n).operators
    second_ops = kraus_from_noise(second if second is not None else n).operators
    ops = []
    for a in first_ops:
        for b in second_ops:
            ops.append(np.kron(b @ a, _P00) + np.kron(a @ b, _P11))
    return ops


def switch_output(n: NoiseSpec, c: ControlSpec, s: PureQubit,
                  second: NoiseSpec | None = None) -> np.ndarray:
    """Full 4x4 switch output sum_ij W_ij (rho (x) rho_c) W_ij^dag, before measurement."""
    big = np.kron(input_density(s), control_density(c))
    out = np.zeros((4, 4), dtype=complex)
    for w in switch_kraus(n, second):
        out += w @ big @ w.conj().T
    return out


def simulate_projected(n: NoiseSpec, c: ControlSpec, ket, s: PureQubit,
                       second: NoiseSpec | None = None) -> TeleportResult:
    """Simulate the switch and post-select the control on an arbitrary unit ket."""
    rho = input_density(s)
    rho_out = qmath.inner_project_control(switch_output(n, c, s, second), ket)
    f_un = np.trace(rho_out @ rho).real
    prob = np.trace(rho_out).real
    return _result(f_un, prob)


def simulate(n: NoiseSpec, c: ControlSpec, m: MeasurementSpec, s: PureQubit,
             second: NoiseSpec | None = None) -> TeleportResult:
    """End-to-end brute-force run, post-selected on the measurement ket.

    Raises :class:`cst.analytic.NullProbabilityError` exactly like the
    closed-form route when the branch probability is below 1e-12.
    """
    return simulate_projected(n, c, measurement_ket(m), s, second)


def simulate_orthogonal(n: NoiseSpec, c: ControlSpec, m: MeasurementSpec, s: PureQubit,
                        second: NoiseSpec | None = None) -> TeleportResult:
    """Brute-force run post-selected on the complementary measurement outcome."""
    return simulate_projected(n, c, measurement_ket_orthogonal(m), s, second)
