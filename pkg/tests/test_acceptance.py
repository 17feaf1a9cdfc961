"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines alongside the pytest verdicts.
"""

import math
from contextlib import contextmanager

import numpy as np

from cst import oracle
from cst.analytic import evaluate, evaluate_orthogonal, pauli_trace_tables, switch_weights
from cst.cli import run_verification
from cst.model import ControlSpec, MeasurementSpec, NoiseSpec, PureQubit, input_density
from cst.optimizer import optimize_measurement

WORST = NoiseSpec.from_p(1.0 / 3.0)


@contextmanager
def criterion(num, description):
    try:
        yield
    except AssertionError:
        print(f"FAIL criterion {num}: {description}")
        raise
    print(f"PASS criterion {num}: {description}")


def random_input_states(seed, count):
    rng = np.random.default_rng(seed)
    return [PureQubit(float(rng.uniform(0, math.pi)),
                      float(rng.uniform(-math.pi, math.pi)))
            for _ in range(count)]


def test_criterion_1_worst_case_perfection():
    targets = {0.1: 0.12, 0.3: 0.28, 0.5: 0.33, 0.7: 0.28, 0.9: 0.12}
    with criterion(1, "worst-case noise reaches f*=1 at the expected probabilities"):
        for q0, p_target in targets.items():
            report = optimize_measurement(WORST, ControlSpec(q0))
            assert abs(report.f_star - 1.0) <= 1e-9, (q0, report.f_star)
            assert abs(report.p_star - p_target) <= 0.005, (q0, report.p_star)
            best = MeasurementSpec(report.theta_star, report.phi_star)
            for state in random_input_states(1000 + int(10 * q0), 100):
                fid = evaluate(WORST, ControlSpec(q0), best, state).fidelity
                assert abs(fid - 1.0) <= 1e-9, (q0, state, fid)


def test_criterion_2_balanced_control_optimum_is_plus_measurement():
    with criterion(2, "q0=0.5 optimum is theta*=pi/2, phi*=0 within 1e-6 rad"):
        report = optimize_measurement(WORST, ControlSpec(0.5))
        assert abs(report.theta_star - math.pi / 2) <= 1e-6
        assert abs(report.phi_star) <= 1e-6


def test_criterion_3_intermediate_noise_best_fidelity():
    with criterion(3, "p=1/6, q0=1/4 gives f*=0.60; probability cross-checked"):
        noise = NoiseSpec.from_p(1.0 / 6.0)
        control = ControlSpec(0.25)
        report = optimize_measurement(noise, control)
        assert abs(report.f_star - 0.60) <= 0.005, report.f_star
        best = MeasurementSpec(report.theta_star, report.phi_star)
        state = PureQubit(0.9, 0.4)
        closed = evaluate(noise, control, best, state)
        circuit = oracle.simulate(noise, control, best, state)
        assert abs(closed.prob - circuit.prob) <= 1e-10
        # reported, not asserted: the measured probability at this optimum
        print(f"  note: measured probability at the optimum is {closed.prob:.6f} "
              f"(reference value: 0.28)")


def test_criterion_4_best_fidelity_independent_of_control_weight():
    with criterion(4, "f*(q0) constant over q0 in {0.1..0.9} for each isotropic p"):
        for p in (1.0 / 12.0, 1.0 / 6.0, 1.0 / 4.0, 1.0 / 3.0):
            noise = NoiseSpec.from_p(p)
            stars = [optimize_measurement(noise, ControlSpec(float(q0))).f_star
                     for q0 in np.linspace(0.1, 0.9, 9)]
            assert max(stars) - min(stars) <= 1e-9, (p, stars)


def test_criterion_5_optimal_theta_curve():
    with criterion(5, "theta* = arccos(1-2 q0) within 1e-6 rad, phi* = 0"):
        for p in (1.0 / 6.0, 1.0 / 3.0):
            noise = NoiseSpec.from_p(p)
            for q0 in np.linspace(0.05, 0.95, 19):
                report = optimize_measurement(noise, ControlSpec(float(q0)))
                expected = math.acos(1.0 - 2.0 * float(q0))
                assert abs(report.theta_star - expected) <= 1e-6, (p, q0)
                assert abs(report.phi_star) <= 1e-6, (p, q0)


def test_criterion_6_oracle_equivalence_on_random_draws():
    with criterion(6, "1000 random anisotropic draws: closed form == circuit to 1e-10"):
        rng = np.random.default_rng(42)
        worst_dev = worst_sum = 0.0
        for _ in range(1000):
            ps = rng.random(4)
            ps = ps / ps.sum()
            n = NoiseSpec(*ps)
            c = ControlSpec(float(rng.uniform(0, 1)))
            m = MeasurementSpec(float(rng.uniform(0, math.pi)),
                                float(rng.uniform(-math.pi, math.pi)))
            s = PureQubit(float(rng.uniform(0, math.pi)),
                          float(rng.uniform(-math.pi, math.pi)))
            ra, ro = evaluate(n, c, m, s), oracle.simulate(n, c, m, s)
            dev = max(abs(ra.f_un - ro.f_un), abs(ra.prob - ro.prob),
                      abs(ra.fidelity - ro.fidelity))
            worst_dev = max(worst_dev, dev)
            total = ra.prob + evaluate_orthogonal(n, c, m, s).prob
            worst_sum = max(worst_sum, abs(total - 1.0))
        assert worst_dev < 1e-10, worst_dev
        assert worst_sum < 1e-10, worst_sum
        print(f"  note: max field deviation {worst_dev:.3e}, "
              f"max branch-sum deviation {worst_sum:.3e}")


def test_criterion_7_trace_identity_audit():
    with criterion(7, "ordered trace family is 1; crossed family measured and constant"):
        rng = np.random.default_rng(202)
        reference = None
        for _ in range(50):
            s = PureQubit(float(rng.uniform(0, math.pi)),
                          float(rng.uniform(-math.pi, math.pi)))
            t1, t2 = pauli_trace_tables(input_density(s))
            assert np.max(np.abs(t1 - 1.0)) <= 1e-12
            if reference is None:
                reference = t2
            assert np.max(np.abs(t2 - reference)) <= 1e-12
        # constant for nonzero index pairs, and emitted by the verify battery
        inner = reference[1:, 1:]
        assert np.max(np.abs(np.abs(inner) - 1.0)) <= 1e-12
        battery = run_verification(draws=1, seed=42)
        assert np.max(np.abs(battery.second_trace_table - reference)) <= 1e-12
        rows = ["  ".join(f"{v:+.0f}" for v in row) for row in reference]
        print("  measured crossed-family table: " + " / ".join(rows))


def test_criterion_8_degenerate_control_reduces_to_definite_order():
    with criterion(8, "q0 in {0,1}: cross coefficient 0, routes agree to 1e-12"):
        rng = np.random.default_rng(303)
        for _ in range(50):
            ps = rng.random(4)
            ps = ps / ps.sum()
            n = NoiseSpec(*ps)
            m = MeasurementSpec(float(rng.uniform(0.1, math.pi - 0.1)),
                                float(rng.uniform(-math.pi, math.pi)))
            s = PureQubit(float(rng.uniform(0, math.pi)),
                          float(rng.uniform(-math.pi, math.pi)))
            for q0 in (0.0, 1.0):
                c = ControlSpec(q0)
                assert switch_weights(c, m).b_coeff == 0.0
                ra, ro = evaluate(n, c, m, s), oracle.simulate(n, c, m, s)
                assert abs(ra.f_un - ro.f_un) <= 1e-12
                assert abs(ra.prob - ro.prob) <= 1e-12
                assert abs(ra.fidelity - ro.fidelity) <= 1e-12
