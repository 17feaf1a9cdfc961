"""Measurement-angle optimization: maximize normalized fidelity over (theta, phi).

A coarse grid scan over [0, pi] x [-pi, pi) seeds a coordinate-wise
golden-section refinement. The closed-form point theta = arccos(1 - 2 q0),
phi = 0 (the solution of a = b at phi = 0, which is the true maximizer for
isotropic noise) is always injected as an extra candidate. Grid points whose
post-selection probability falls below ``prob_floor`` are excluded from
candidacy: a perfect fidelity conditioned on a near-impossible outcome is
tracked separately, not reported as the optimum.

Ties on fidelity plateaus are broken deterministically: smallest theta first,
then smallest non-negative phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import WeightResponse, weight_response
from .model import ControlSpec, MeasurementSpec, NoiseSpec, PureQubit

DEFAULT_PROBE = PureQubit(math.pi / 3.0, math.pi / 4.0)
"""Default input state: deliberately asymmetric so symmetry bugs cannot hide.

For isotropic noise the optimum is provably independent of the input state,
so this choice does not affect the optima.
"""

_TIE_EPS = 1e-12        # candidates this close to the best fidelity count as tied
_ACCEPT_EPS = 1e-14     # refinement must beat the incumbent by more than plateau noise
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class AllPointsNullError(Exception):
    """Every scanned measurement has post-selection probability below the floor."""


@dataclass(frozen=True)
class OptimizeConfig:
    """Grid density and refinement knobs; defaults localize optima to < 1e-6 rad."""

    grid_points: int = 64        # per axis; must be >= 32
    tolerance: float = 1e-12     # stop sweeping once a full sweep improves less than this
    sweeps: int = 3              # coordinate-refinement sweeps
    prob_floor: float = 1e-9     # candidacy threshold on post-selection probability
    xtol: float = 1e-9           # golden-section bracket width at termination


@dataclass(frozen=True)
class SeedCandidate:
    """Closed-form candidate measurement plus a degeneracy marker."""

    measurement: MeasurementSpec
    degenerate: bool


@dataclass(frozen=True)
class OptimumReport:
    theta_star: float
    phi_star: float
    f_star: float
    p_star: float
    grid_points: int
    refinement_iterations: int
    excluded_points: int = 0
    excluded_best_fidelity: float | None = None


def closed_form_candidate(c: ControlSpec) -> SeedCandidate:
    """Measurement solving a = b at phi = 0: theta = arccos(1 - 2 q0), phi = 0.

    At q0 in {0, 1} the cross term vanishes identically and the candidate
    degenerates to theta = 0 (q0 = 0) or theta = pi (q0 = 1); the flag marks
    that case.
    """
    theta = math.acos(max(-1.0, min(1.0, 1.0 - 2.0 * c.q0)))
    degenerate = c.q0 in (0.0, 1.0)
    return SeedCandidate(MeasurementSpec(theta, 0.0), degenerate)


def _weights(q0: float, theta: float, phi: float) -> tuple[float, float]:
    a = 0.5 + (q0 - 0.5) * math.cos(theta)
    b = math.sqrt(q0 * (1.0 - q0)) * math.sin(theta) * math.cos(phi)
    return a, b


def _golden_max(fun, lo: float, hi: float, xtol: float) -> tuple[float, float]:
    """Golden-section maximization on [lo, hi]; returns the best probed point."""
    best_x, best_f = lo, fun(lo)
    f_hi = fun(hi)
    if f_hi > best_f:
        best_x, best_f = hi, f_hi
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = fun(c), fun(d)
    for _ in range(200):
        if hi - lo <= xtol:
            break
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = fun(c)
            if fc > best_f:
                best_x, best_f = c, fc
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = fun(d)
            if fd > best_f:
                best_x, best_f = d, fd
    return best_x, best_f


def optimize_measurement(n: NoiseSpec, c: ControlSpec, s: PureQubit = DEFAULT_PROBE,
                         cfg: OptimizeConfig | None = None) -> OptimumReport:
    """Global maximum of the normalized fidelity over the measurement rectangle.

    Raises :class:`AllPointsNullError` if every candidate point is below the
    probability floor.
    """
    cfg = cfg or OptimizeConfig()
    if cfg.grid_points < 32:
        raise ValueError(f"grid density must be >= 32 per axis, got {cfg.grid_points}")

    resp: WeightResponse = weight_response(n, s)
    q0 = c.q0

    thetas = np.linspace(0.0, math.pi, cfg.grid_points)
    phis = np.linspace(-math.pi, math.pi, cfg.grid_points, endpoint=False)
    a_grid = 0.5 + (q0 - 0.5) * np.cos(thetas)[:, None]
    b_grid = math.sqrt(q0 * (1.0 - q0)) * np.sin(thetas)[:, None] * np.cos(phis)[None, :]
    f_un, prob = resp.unnormalized(a_grid, b_grid)

    valid = prob >= cfg.prob_floor
    excluded = int(valid.size - np.count_nonzero(valid))
    excluded_best = None
    orphan = (~valid) & (prob > 1e-12)
    if np.any(orphan):
        excluded_best = float(np.max(f_un[orphan] / prob[orphan]))

    candidates: list[tuple[float, float, float]] = []  # (fidelity, theta, phi)
    if np.any(valid):
        fid = np.full_like(prob, -np.inf)
        fid[valid] = f_un[valid] / prob[valid]
        fmax = float(fid.max())
        ti, pi_ = np.nonzero(fid >= fmax - _TIE_EPS)
        candidates.extend((float(fid[i, j]), float(thetas[i]), float(phis[j]))
                          for i, j in zip(ti, pi_))

    seed = closed_form_candidate(c)
    if not seed.degenerate:
        a, b = _weights(q0, seed.measurement.theta, seed.measurement.phi)
        f_s, p_s = resp.unnormalized(a, b)
        if p_s >= cfg.prob_floor:
            candidates.append((f_s / p_s, seed.measurement.theta, seed.measurement.phi))

    if not candidates:
        raise AllPointsNullError(
            f"all {valid.size} scanned measurements have probability below "
            f"{cfg.prob_floor}")

    fmax = max(f for f, _, _ in candidates)
    tied = [(t, p) for f, t, p in candidates if f >= fmax - _TIE_EPS]
    theta_c, phi_c = min(tied, key=lambda tp: (tp[0], tp[1] < 0.0, abs(tp[1])))

    def fid_at(theta: float, phi: float) -> float:
        a, b = _weights(q0, theta, phi)
        f, p = resp.unnormalized(a, b)
        return f / p if p >= cfg.prob_floor else -np.inf

    f_c = fid_at(theta_c, phi_c)
    dtheta = math.pi / (cfg.grid_points - 1)
    dphi = 2.0 * math.pi / cfg.grid_points
    iterations = 0
    for _ in range(cfg.sweeps):
        f_before = f_c
        lo, hi = max(0.0, theta_c - dtheta), min(math.pi, theta_c + dtheta)
        t_new, f_new = _golden_max(lambda t: fid_at(t, phi_c), lo, hi, cfg.xtol)
        if f_new > f_c + _ACCEPT_EPS:
            theta_c, f_c = t_new, f_new
        lo, hi = max(-math.pi, phi_c - dphi), min(math.pi, phi_c + dphi)
        p_new, f_new = _golden_max(lambda p: fid_at(theta_c, p), lo, hi, cfg.xtol)
        if f_new > f_c + _ACCEPT_EPS:
            phi_c, f_c = p_new, f_new
        iterations += 1
        if f_c - f_before < cfg.tolerance:
            break

    if phi_c >= math.pi:  # keep the report inside [-pi, pi)
        phi_c = -math.pi
    a, b = _weights(q0, theta_c, phi_c)
    f_fin, p_fin = resp.unnormalized(a, b)
    return OptimumReport(
        theta_star=float(theta_c),
        phi_star=float(phi_c),
        f_star=float(f_fin / p_fin),
        p_star=float(p_fin),
        grid_points=int(thetas.size * phis.size),
        refinement_iterations=iterations,
        excluded_points=excluded,
        excluded_best_fidelity=excluded_best,
    )
