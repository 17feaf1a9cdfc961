"""Parameter sweeps reproducing the reported fidelity landscapes.

Three sweep kinds:

* fidelity contours over the measurement rectangle (theta, phi) at fixed
  noise and control weight;
* the optimal polar angle theta* as a function of the control weight q0;
* surfaces of best fidelity f* and optimal theta* over (p, q0) for the
  isotropic noise family.

Grids serialize to CSV (``#``-prefixed provenance preamble, RFC-4180-quoted
data rows, LF endings, 12 significant digits) or JSON. Cells whose
post-selection probability falls below 1e-9 carry no meaningful fidelity and
are emitted as the explicit sentinel ``null``, never as 0 or a NaN number.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .analytic import weight_response
from .model import ControlSpec, NoiseSpec, PureQubit
from .optimizer import DEFAULT_PROBE, OptimizeConfig, optimize_measurement

NULL_PROB_FLOOR = 1e-9
"""Cells with post-selection probability below this are flagged null."""

DEFAULT_CONTOUR_RESOLUTION = 181          # 1-degree steps in theta (and phi, doubled)
DEFAULT_Q0_SAMPLES = 19                   # 0.05 .. 0.95
DEFAULT_P_SAMPLES = 21                    # 0 .. 1/3


@dataclass
class SweepGrid:
    """A named rectangular sweep: axis samples plus a value plane.

    ``values`` is indexed row-major by the axes in order; null cells are NaN
    internally and become the ``null`` sentinel on serialization. ``probs``
    optionally carries the post-selection probability per cell.
    """

    axes: tuple[str, ...]
    samples: tuple[np.ndarray, ...]
    values: np.ndarray
    value_name: str
    probs: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.axes) != len(self.samples):
            raise ValueError("one sample vector required per axis")
        for name, vec in zip(self.axes, self.samples):
            vec = np.asarray(vec, dtype=float)
            if vec.ndim != 1 or vec.size == 0:
                raise ValueError(f"axis {name!r} must be a non-empty vector")
            if np.any(np.diff(vec) <= 0):
                raise ValueError(f"axis {name!r} must be strictly increasing")
        shape = tuple(len(v) for v in self.samples)
        if self.values.shape != shape:
            raise ValueError(
                f"value matrix shape {self.values.shape} does not match axes {shape}")
        if self.probs is not None and self.probs.shape != shape:
            raise ValueError("probability matrix shape does not match axes")


def _noise_meta(n: NoiseSpec) -> dict:
    return {"p0": float(n.p0), "p1": float(n.p1), "p2": float(n.p2), "p3": float(n.p3)}


def _input_meta(s: PureQubit) -> dict:
    return {"theta0": float(s.theta0), "phi0": float(s.phi0)}


def contour_theta_phi(n: NoiseSpec, c: ControlSpec, s: PureQubit = DEFAULT_PROBE,
                      resolution: int = DEFAULT_CONTOUR_RESOLUTION) -> SweepGrid:
    """Fidelity over theta in [0, pi] x phi in [-pi, pi], uniform grid.

    ``resolution`` sets the theta sample count; phi gets 2*resolution - 1
    samples so both axes share the same angular step (181 -> 1-degree cells).
    """
    if resolution < 32:
        raise ValueError(f"contour resolution must be >= 32, got {resolution}")
    thetas = np.linspace(0.0, math.pi, resolution)
    phis = np.linspace(-math.pi, math.pi, 2 * resolution - 1)
    resp = weight_response(n, s)
    a = 0.5 + (c.q0 - 0.5) * np.cos(thetas)[:, None]
    b = math.sqrt(c.q0 * c.q1) * np.sin(thetas)[:, None] * np.cos(phis)[None, :]
    f_un, prob = resp.unnormalized(a, b)
    values = np.full(prob.shape, np.nan)
    ok = prob >= NULL_PROB_FLOOR
    values[ok] = f_un[ok] / prob[ok]
    meta = {
        "sweep": "contour",
        "noise": _noise_meta(n),
        "q0": float(c.q0),
        "input": _input_meta(s),
        "resolution": resolution,
        "version": __version__,
    }
    return SweepGrid(("theta", "phi"), (thetas, phis), values, "fidelity",
                     probs=prob, meta=meta)


def optimal_theta_curve(n: NoiseSpec, s: PureQubit = DEFAULT_PROBE,
                        q0_samples=None, cfg: OptimizeConfig | None = None) -> SweepGrid:
    """Optimal theta* per control weight q0; probs carries the probability p*."""
    if q0_samples is None:
        q0_samples = np.linspace(0.05, 0.95, DEFAULT_Q0_SAMPLES)
    q0_samples = np.asarray(q0_samples, dtype=float)
    if np.any(q0_samples <= 0.0) or np.any(q0_samples >= 1.0):
        raise ValueError("q0 samples must lie strictly inside (0, 1)")
    thetas = np.empty(q0_samples.size)
    probs = np.empty(q0_samples.size)
    for k, q0 in enumerate(q0_samples):
        report = optimize_measurement(n, ControlSpec(float(q0)), s, cfg)
        thetas[k] = report.theta_star
        probs[k] = report.p_star
    meta = {
        "sweep": "theta-curve",
        "noise": _noise_meta(n),
        "input": _input_meta(s),
        "version": __version__,
    }
    return SweepGrid(("q0",), (q0_samples,), thetas, "theta_star", probs=probs, meta=meta)


def surface_p_q0(s: PureQubit = DEFAULT_PROBE, p_samples=None, q0_samples=None,
                 cfg: OptimizeConfig | None = None,
                 threads: int = 0) -> tuple[SweepGrid, SweepGrid]:
    """Best fidelity f* and optimal theta* over the (p, q0) rectangle.

    Returns a pair of grids (f* with p* probabilities, theta*). ``threads``
    > 1 parallelizes over p rows; assembly order is fixed by the axes, so the
    output does not depend on scheduling.
    """
    if p_samples is None:
        p_samples = np.linspace(0.0, 1.0 / 3.0, DEFAULT_P_SAMPLES)
    if q0_samples is None:
        q0_samples = np.linspace(0.05, 0.95, DEFAULT_Q0_SAMPLES)
    p_samples = np.asarray(p_samples, dtype=float)
    q0_samples = np.asarray(q0_samples, dtype=float)
    if np.any(q0_samples <= 0.0) or np.any(q0_samples >= 1.0):
        raise ValueError("q0 samples must lie strictly inside (0, 1)")
    if np.any(p_samples < 0.0) or np.any(p_samples > 1.0 / 3.0):
        raise ValueError("p samples must lie in [0, 1/3]")

    def row(p: float):
        noise = NoiseSpec.from_p(p)
        reports = [optimize_measurement(noise, ControlSpec(float(q0)), s, cfg)
                   for q0 in q0_samples]
        return ([r.f_star for r in reports], [r.p_star for r in reports],
                [r.theta_star for r in reports])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, p_samples))
    else:
        rows = [row(float(p)) for p in p_samples]

    f_star = np.array([r[0] for r in rows])
    p_star = np.array([r[1] for r in rows])
    theta_star = np.array([r[2] for r in rows])
    meta = {
        "sweep": "surface",
        "input": _input_meta(s),
        "version": __version__,
    }
    f_grid = SweepGrid(("p", "q0"), (p_samples, q0_samples), f_star, "f_star",
                       probs=p_star, meta=dict(meta))
    t_grid = SweepGrid(("p", "q0"), (p_samples, q0_samples), theta_star, "theta_star",
                       meta=dict(meta))
    return f_grid, t_grid


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def atomic_write(path: str, write_body) -> None:
    """Write via a temp file in the target directory, then rename into place."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cst-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            write_body(handle)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _meta_lines(meta: dict) -> list[str]:
    lines = []
    for key, value in meta.items():
        if isinstance(value, dict):
            value = " ".join(f"{k}={_fmt(v) if isinstance(v, float) else v}"
                             for k, v in value.items())
        elif isinstance(value, float):
            value = _fmt(value)
        lines.append(f"# {key}: {value}")
    return lines


def write_csv(grid: SweepGrid, path: str) -> None:
    """Serialize a grid: ``#`` provenance preamble, then axis/value/prob columns."""

    def body(handle):
        for line in _meta_lines(grid.meta):
            handle.write(line + "\n")
        writer = csv.writer(handle, lineterminator="\n")
        header = list(grid.axes) + ["value"]
        if grid.probs is not None:
            header.append("prob")
        writer.writerow(header)
        for index in np.ndindex(grid.values.shape):
            row = [_fmt(float(grid.samples[k][i])) for k, i in enumerate(index)]
            value = grid.values[index]
            row.append("null" if np.isnan(value) else _fmt(float(value)))
            if grid.probs is not None:
                row.append(_fmt(float(grid.probs[index])))
            writer.writerow(row)

    atomic_write(path, body)


def _nan_to_null(values):
    if isinstance(values, list):
        return [_nan_to_null(v) for v in values]
    return None if math.isnan(values) else values


def write_json(grid: SweepGrid, path: str) -> None:
    """Serialize a grid as {"axes", "values", "probs"?, "meta"}; null cells are null."""
    doc = {
        "axes": {name: list(map(float, vec))
                 for name, vec in zip(grid.axes, grid.samples)},
        "value_name": grid.value_name,
        "values": _nan_to_null(grid.values.tolist()),
    }
    if grid.probs is not None:
        doc["probs"] = grid.probs.tolist()
    doc["meta"] = grid.meta

    def body(handle):
        json.dump(doc, handle, indent=2)
        handle.write("\n")

    atomic_write(path, body)


def write_grid(grid: SweepGrid, path: str, fmt: str) -> None:
    if fmt == "csv":
        write_csv(grid, path)
    elif fmt == "json":
        write_json(grid, path)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
