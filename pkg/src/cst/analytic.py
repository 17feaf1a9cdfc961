"""Closed-form evaluation of the two-channel causal-order switch.

Sending a pure qubit rho through two identical Pauli channels whose ordering
is controlled by a qubit with weights (q0, 1-q0), then post-selecting the
control on the state with Bloch angles (theta, phi), leaves the unnormalized
system state

    L_un[rho] = sum_{i,j} p_i p_j ( a * s_i s_j rho s_j s_i
                                  + b * s_i s_j rho s_i s_j ),

    a = 1/2 + (q0 - 1/2) cos(theta),    b = sqrt(q0 q1) sin(theta) cos(phi).

From it follow the unnormalized fidelity Tr(L_un[rho] rho), the post-selection
probability Tr(L_un[rho]) and the normalized fidelity (their ratio). Every
trace here is computed from explicit 2x2 matrix products; the tempting Pauli
trace shortcuts are measured (see :func:`pauli_trace_tables`) but never used,
because the sign pattern of Tr(s_i s_j rho s_i s_j) is easy to get wrong.

Anisotropic mixtures (independent p0..p3) are accepted everywhere; the
isotropic family p1=p2=p3 is just a convenient special case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qmath
from .model import (
    ControlSpec,
    MeasurementSpec,
    NoiseSpec,
    PureQubit,
    input_density,
    pauli,
)

PROB_FLOOR = 1e-12
"""Below this post-selection probability the normalized fidelity is undefined."""

# sigma_i sigma_j for all index pairs; PAIR_PRODUCT[j, i] is the adjoint of
# PAIR_PRODUCT[i, j].
PAIR_PRODUCT = np.empty((4, 4, 2, 2), dtype=complex)
for _i in range(4):
    for _j in range(4):
        PAIR_PRODUCT[_i, _j] = pauli(_i) @ pauli(_j)
PAIR_PRODUCT.setflags(write=False)


class NullProbabilityError(Exception):
    """Post-selected on an outcome of (numerically) zero probability.

    The normalized fidelity is undefined there: conditioning on an event that
    never occurs is meaningless, so this is reported as a distinct error
    rather than a 0, 1 or NaN fidelity.
    """

    def __init__(self, probability: float):
        super().__init__(
            f"post-selection probability {probability!r} is below {PROB_FLOOR}; "
            "normalized fidelity is undefined")
        self.probability = probability


@dataclass(frozen=True)
class TeleportResult:
    """Unnormalized fidelity, post-selection probability and their ratio."""

    f_un: float
    prob: float
    fidelity: float


@dataclass(frozen=True)
class SwitchWeights:
    """The two scalar coefficients multiplying the switch output terms.

    ``a_coeff`` weighs the order-preserving conjugations s_i s_j rho s_j s_i
    and lies in [0, 1]; ``b_coeff`` weighs the interference terms
    s_i s_j rho s_i s_j and satisfies |b_coeff| <= 1/2.
    """

    a_coeff: float
    b_coeff: float

    def orthogonal(self) -> "SwitchWeights":
        """Weights of the complementary measurement outcome: (1 - a, -b)."""
        return SwitchWeights(1.0 - self.a_coeff, -self.b_coeff)


def switch_weights(c: ControlSpec, m: MeasurementSpec) -> SwitchWeights:
    """Coefficients (a, b) for control weight q0 and measurement angles (theta, phi)."""
    a = 0.5 + (c.q0 - 0.5) * math.cos(m.theta)
    b = math.sqrt(c.q0 * c.q1) * math.sin(m.theta) * math.cos(m.phi)
    return SwitchWeights(a, b)


def unnormalized_output(n: NoiseSpec, w: SwitchWeights, rho) -> np.ndarray:
    """Evaluate L_un[rho] by the explicit double sum over Pauli pairs.

    ``rho`` must be Hermitian with unit trace (tolerance 1e-10).
    """
    rho = qmath.check_density(rho)
    probs = n.as_array()
    out = np.zeros((2, 2), dtype=complex)
    for i in range(4):
        for j in range(4):
            fwd = PAIR_PRODUCT[i, j]
            rev = PAIR_PRODUCT[j, i]  # == dagger(fwd)
            out += probs[i] * probs[j] * (
                w.a_coeff * (fwd @ rho @ rev) + w.b_coeff * (fwd @ rho @ fwd))
    return out


def _result(f_un: float, prob: float) -> TeleportResult:
    f_un, prob = float(f_un), float(prob)
    if prob < PROB_FLOOR:
        raise NullProbabilityError(prob)
    return TeleportResult(f_un, prob, f_un / prob)


def _evaluate_weights(n: NoiseSpec, w: SwitchWeights, s: PureQubit) -> TeleportResult:
    rho = input_density(s)
    out = unnormalized_output(n, w, rho)
    f_un = np.trace(out @ rho).real
    prob = np.trace(out).real
    return _result(f_un, prob)


def evaluate(n: NoiseSpec, c: ControlSpec, m: MeasurementSpec, s: PureQubit) -> TeleportResult:
    """Closed-form teleportation figures for one scenario.

    Returns f_un = Tr(L_un[rho] rho), prob = Tr(L_un[rho]) and
    fidelity = f_un / prob, all from explicit matrices.

    Raises :class:`NullProbabilityError` when prob < 1e-12.
    """
    return _evaluate_weights(n, switch_weights(c, m), s)


def evaluate_orthogonal(n: NoiseSpec, c: ControlSpec, m: MeasurementSpec,
                        s: PureQubit) -> TeleportResult:
    """Same as :func:`evaluate` for the complementary measurement outcome."""
    return _evaluate_weights(n, switch_weights(c, m).orthogonal(), s)


@dataclass(frozen=True)
class WeightResponse:
    """Linear response of (f_un, prob) to the switch weights (a, b).

    L_un[rho] is linear in (a, b), so for a fixed noise mixture and input
    state there are four scalars with

        f_un = a * f_a + b * f_b        prob = a * p_a + b * p_b.

    They are computed once from explicit matrix products; sweeping
    measurements then costs two multiply-adds per grid point. Agrees with
    :func:`evaluate` to roundoff (same matrix products, reassociated sum).
    """

    f_a: float
    f_b: float
    p_a: float
    p_b: float

    def unnormalized(self, a, b):
        """(f_un, prob) for scalar or array-valued weight coefficients."""
        return self.f_a * a + self.f_b * b, self.p_a * a + self.p_b * b

    def result(self, w: SwitchWeights) -> TeleportResult:
        f_un, prob = self.unnormalized(w.a_coeff, w.b_coeff)
        return _result(float(f_un), float(prob))


def weight_response(n: NoiseSpec, s: PureQubit) -> WeightResponse:
    """Precompute the four response scalars for one noise mixture and input state."""
    rho = input_density(s)
    probs = n.as_array()
    f_a = f_b = p_a = p_b = 0.0
    for i in range(4):
        for j in range(4):
            wij = probs[i] * probs[j]
            fwd = PAIR_PRODUCT[i, j]
            ordered = fwd @ rho @ PAIR_PRODUCT[j, i]
            crossed = fwd @ rho @ fwd
            f_a += wij * np.trace(ordered @ rho).real
            f_b += wij * np.trace(crossed @ rho).real
            p_a += wij * np.trace(ordered).real
            p_b += wij * np.trace(crossed).real
    return WeightResponse(float(f_a), float(f_b), float(p_a), float(p_b))


def pauli_trace_tables(rho) -> tuple[np.ndarray, np.ndarray]:
    """Measure the two 16-cell Pauli sandwich trace tables for a state rho.

    Returns (T1, T2) with T1[i, j] = Re Tr(s_i s_j rho s_j s_i) and
    T2[i, j] = Re Tr(s_i s_j rho s_i s_j), computed by direct multiplication.
    For any unit-trace rho, T1 is identically 1; T2 is +1 when i == j or
    either index is 0, and -1 for distinct non-zero indices.
    """
    rho = qmath.check_density(rho)
    t1 = np.empty((4, 4), dtype=float)
    t2 = np.empty((4, 4), dtype=float)
    for i in range(4):
        for j in range(4):
            fwd = PAIR_PRODUCT[i, j]
            t1[i, j] = np.trace(fwd @ rho @ PAIR_PRODUCT[j, i]).real
            t2[i, j] = np.trace(fwd @ rho @ fwd).real
    return t1, t2
