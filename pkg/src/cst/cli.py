"""Command-line front door.

Four commands share one scenario vocabulary (angles in radians, probabilities
as decimals):

* ``fidelity``  -- evaluate one explicit measurement, print both branches;
* ``optimize``  -- find the measurement maximizing normalized fidelity;
* ``sweep``     -- write contour / theta-curve / surface grids to CSV or JSON;
* ``verify``    -- run the closed-form-vs-circuit battery and the Pauli trace
  audit on seeded random draws.

The command word may appear anywhere on the line; a bare ``--theta`` with no
command implies ``fidelity``. Exit codes: 0 ok, 1 verification failure,
2 usage error, 3 degenerate scenario (zero-probability branch or an all-null
optimization grid).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import analytic, oracle
from ._version import __version__
from .analytic import NullProbabilityError, pauli_trace_tables
from .experiments import (
    atomic_write,
    contour_theta_phi,
    optimal_theta_curve,
    surface_p_q0,
    write_grid,
)
from .model import ControlSpec, MeasurementSpec, NoiseSpec, PureQubit, input_density
from .optimizer import (
    AllPointsNullError,
    OptimizeConfig,
    closed_form_candidate,
    optimize_measurement,
)

_COMMANDS = ("fidelity", "optimize", "sweep", "verify")


class UsageError(Exception):
    """Invalid flag combination or parameter value; maps to exit code 2."""


# ----------------------------------------------------------------------------
# verification battery
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class SuiteResult:
    name: str
    max_dev: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    draws: int
    seed: int
    suites: tuple[SuiteResult, ...]
    second_trace_table: np.ndarray

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    @property
    def max_deviation(self) -> float:
        return max(s.max_dev for s in self.suites)


def _fields(r) -> np.ndarray:
    return np.array([r.f_un, r.prob, r.fidelity])


def run_verification(draws: int = 1000, seed: int = 42) -> VerificationReport:
    """Seeded random-draw battery checking every closed form against the circuit.

    All scenarios are anisotropic unless a check is specific to the isotropic
    family. Deterministic for a fixed (draws, seed).
    """
    if draws < 1:
        raise ValueError(f"draw count must be >= 1, got {draws}")
    rng = np.random.default_rng(seed)
    suites: list[SuiteResult] = []

    def record(name: str, dev: float, tol: float) -> None:
        suites.append(SuiteResult(name, float(dev), tol, bool(dev <= tol)))

    def scenario():
        ps = rng.random(4)
        ps = ps / ps.sum()
        return (NoiseSpec(*ps),
                ControlSpec(float(rng.uniform(0.0, 1.0))),
                MeasurementSpec(float(rng.uniform(0.0, math.pi)),
                                float(rng.uniform(-math.pi, math.pi))),
                PureQubit(float(rng.uniform(0.0, math.pi)),
                          float(rng.uniform(-math.pi, math.pi))))

    dev_measured = dev_orth = dev_sum = 0.0
    for _ in range(draws):
        n, c, m, s = scenario()
        ra = analytic.evaluate(n, c, m, s)
        ro = oracle.simulate(n, c, m, s)
        dev_measured = max(dev_measured, float(np.max(np.abs(_fields(ra) - _fields(ro)))))
        oa = analytic.evaluate_orthogonal(n, c, m, s)
        oo = oracle.simulate_orthogonal(n, c, m, s)
        dev_orth = max(dev_orth, float(np.max(np.abs(_fields(oa) - _fields(oo)))))
        dev_sum = max(dev_sum, abs(ra.prob + oa.prob - 1.0))
    record("closed form == circuit, measured branch", dev_measured, 1e-10)
    record("closed form == circuit, orthogonal branch", dev_orth, 1e-10)
    record("branch probabilities sum to 1", dev_sum, 1e-10)

    sym_draws = max(1, draws // 10)
    dev_mirror = dev_phi = 0.0
    for _ in range(sym_draws):
        n, c, m, s = scenario()
        base = _fields(analytic.evaluate(n, c, m, s))
        mirrored = analytic.evaluate(
            n, ControlSpec(1.0 - c.q0), MeasurementSpec(math.pi - m.theta, m.phi), s)
        dev_mirror = max(dev_mirror, float(np.max(np.abs(base - _fields(mirrored)))))
        flipped = analytic.evaluate(n, c, MeasurementSpec(m.theta, -m.phi), s)
        dev_phi = max(dev_phi, float(np.max(np.abs(base - _fields(flipped)))))
    record("mirror symmetry q0 -> 1-q0 with theta -> pi-theta", dev_mirror, 1e-10)
    record("azimuthal sign symmetry phi -> -phi", dev_phi, 1e-12)

    iso_cases = max(1, draws // 100)
    dev_input = 0.0
    for _ in range(iso_cases):
        n = NoiseSpec.from_p(float(rng.uniform(0.0, 1.0 / 3.0)))
        c = ControlSpec(float(rng.uniform(0.05, 0.95)))
        m = MeasurementSpec(float(rng.uniform(0.2, math.pi - 0.2)),
                            float(rng.uniform(-1.0, 1.0)))
        rows = []
        for _ in range(20):
            s = PureQubit(float(rng.uniform(0.0, math.pi)),
                          float(rng.uniform(-math.pi, math.pi)))
            rows.append(_fields(analytic.evaluate(n, c, m, s)))
        dev_input = max(dev_input, float(np.max(np.ptp(np.array(rows), axis=0))))
    record("input-state independence under isotropic noise", dev_input, 1e-10)

    dev_def = 0.0
    for _ in range(sym_draws):
        n, _, m, s = scenario()
        for q0 in (0.0, 1.0):
            c = ControlSpec(q0)
            dev_def = max(dev_def, abs(analytic.switch_weights(c, m).b_coeff))
            ra = analytic.evaluate(n, c, m, s)
            ro = oracle.simulate(n, c, m, s)
            dev_def = max(dev_def, float(np.max(np.abs(_fields(ra) - _fields(ro)))))
    record("definite order q0 in {0,1}: cross term vanishes", dev_def, 1e-12)

    dev_t1 = dev_t2 = 0.0
    table_ref = None
    for _ in range(50):
        s = PureQubit(float(rng.uniform(0.0, math.pi)),
                      float(rng.uniform(-math.pi, math.pi)))
        t1, t2 = pauli_trace_tables(input_density(s))
        dev_t1 = max(dev_t1, float(np.max(np.abs(t1 - 1.0))))
        if table_ref is None:
            table_ref = t2
        else:
            dev_t2 = max(dev_t2, float(np.max(np.abs(t2 - table_ref))))
    record("trace family Tr(s_i s_j rho s_j s_i) == 1", dev_t1, 1e-12)
    record("trace family Tr(s_i s_j rho s_i s_j) constant over rho", dev_t2, 1e-12)

    return VerificationReport(draws, seed, tuple(suites), table_ref)


# ----------------------------------------------------------------------------
# argument handling
# ----------------------------------------------------------------------------

def _normalize_argv(argv: list[str]) -> list[str]:
    """Allow the command word anywhere; infer ``fidelity`` from a bare --theta."""
    rest = list(argv)
    i = 0
    while i < len(rest):
        tok = rest[i]
        if tok in ("-h", "--help"):
            i += 1
            continue
        if tok.startswith("-"):
            i += 1 if "=" in tok else 2  # every value option is single-valued
            continue
        break
    if i < len(rest) and rest[i] in _COMMANDS:
        cmd = [rest.pop(i)]
        if cmd[0] == "sweep" and i < len(rest) and not rest[i].startswith("-"):
            cmd.append(rest.pop(i))
        return cmd + rest
    if any(t == "--theta" or t.startswith("--theta=") for t in rest):
        return ["fidelity"] + rest
    return rest


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    noise = shared.add_argument_group("noise (pick one form)")
    noise.add_argument("--p", type=float, help="isotropic strength: (1-3p, p, p, p)")
    noise.add_argument("--p0", type=float, help="explicit mixture component 0")
    noise.add_argument("--p1", type=float, help="explicit mixture component 1")
    noise.add_argument("--p2", type=float, help="explicit mixture component 2")
    noise.add_argument("--p3", type=float, help="explicit mixture component 3")
    shared.add_argument("--q0", type=float, help="causal-order control weight in [0,1]")
    shared.add_argument("--theta0", type=float, default=math.pi / 3.0,
                        help="input state polar angle (default pi/3)")
    shared.add_argument("--phi0", type=float, default=math.pi / 4.0,
                        help="input state azimuthal angle (default pi/4)")
    shared.add_argument("--seed", type=int, default=42,
                        help="seed for random-draw commands; echoed in metadata")
    shared.add_argument("--out", help="output file path")
    shared.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output file format (default: json for results, csv for sweeps)")
    shared.add_argument("--threads", type=int, default=0,
                        help="worker threads for sweeps; capped by CST_THREADS")

    parser = argparse.ArgumentParser(
        prog="cst",
        description="Teleportation through two Pauli channels in a causal-order "
                    "superposition: closed forms, circuit oracle, optimizer, sweeps.",
        epilog="All angles are radians; all probabilities are decimals in [0,1].")
    parser.add_argument("--version", action="version", version=f"cst {__version__}")
    sub = parser.add_subparsers(dest="command")

    p_fid = sub.add_parser("fidelity", parents=[shared],
                           help="evaluate one explicit control measurement")
    p_fid.add_argument("--theta", type=float, help="measurement polar angle (required)")
    p_fid.add_argument("--phi", type=float, default=0.0,
                       help="measurement azimuthal angle (default 0)")
    p_fid.set_defaults(func=cmd_fidelity)

    p_opt = sub.add_parser("optimize", parents=[shared],
                           help="maximize fidelity over the measurement angles")
    p_opt.add_argument("--grid", type=int, default=64,
                       help="scan density per axis, >= 32 (default 64)")
    p_opt.add_argument("--tol", type=float, default=1e-12,
                       help="refinement stopping tolerance on fidelity (default 1e-12)")
    p_opt.set_defaults(func=cmd_optimize)

    p_sweep = sub.add_parser("sweep", parents=[shared],
                             help="write a figure grid to CSV/JSON")
    p_sweep.add_argument("kind", choices=("contour", "theta-curve", "surface"))
    p_sweep.add_argument("--resolution", type=int, default=181,
                         help="theta samples for contour sweeps (default 181)")
    p_sweep.add_argument("--q0-count", type=int, default=19, dest="q0_count",
                         help="q0 samples for curve/surface sweeps (default 19)")
    p_sweep.add_argument("--p-count", type=int, default=21, dest="p_count",
                         help="p samples for the surface sweep (default 21)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_ver = sub.add_parser("verify", parents=[shared],
                           help="closed-form vs circuit battery on random draws")
    p_ver.add_argument("--draws", type=int, default=1000,
                       help="number of random scenarios (default 1000)")
    p_ver.set_defaults(func=cmd_verify)
    return parser


@dataclass(frozen=True)
class RunConfig:
    """One invocation's scenario, decoded from flags.

    Exactly one of {explicit measurement, optimize mode} may be active. The
    seed defaults to 42 and is echoed into every output file's metadata.
    """

    noise: NoiseSpec | None
    control: ControlSpec | None
    measurement: MeasurementSpec | None
    optimize: bool
    input: PureQubit
    out: str | None
    format: str | None
    seed: int
    threads: int

    def __post_init__(self):
        if self.optimize and self.measurement is not None:
            raise UsageError(
                "an explicit measurement and optimize mode are mutually exclusive")

    def require_noise(self) -> NoiseSpec:
        if self.noise is None:
            raise UsageError("a noise mixture is required: pass --p or --p0..--p3")
        return self.noise

    def require_control(self) -> ControlSpec:
        if self.control is None:
            raise UsageError("--q0 is required")
        return self.control


def _noise_from_args(args) -> NoiseSpec | None:
    explicit = (args.p0, args.p1, args.p2, args.p3)
    has_explicit = any(v is not None for v in explicit)
    if args.p is not None and has_explicit:
        raise UsageError("--p and --p0..--p3 are mutually exclusive")
    if args.p is not None:
        return NoiseSpec.from_p(args.p)
    if has_explicit:
        if any(v is None for v in explicit):
            raise UsageError("--p0, --p1, --p2, --p3 must be given together")
        return NoiseSpec(*explicit)
    return None


def _run_config(args) -> RunConfig:
    theta = getattr(args, "theta", None)
    measurement = None
    if theta is not None:
        measurement = MeasurementSpec(theta, getattr(args, "phi", 0.0))
    return RunConfig(
        noise=_noise_from_args(args),
        control=ControlSpec(args.q0) if args.q0 is not None else None,
        measurement=measurement,
        optimize=args.command == "optimize",
        input=PureQubit(args.theta0, args.phi0),
        out=args.out,
        format=args.format,
        seed=args.seed,
        threads=_effective_threads(args),
    )


def _resolve_format(cfg: RunConfig, default: str) -> str:
    if cfg.format:
        return cfg.format
    if cfg.out:
        ext = os.path.splitext(cfg.out)[1].lower().lstrip(".")
        if ext in ("csv", "json"):
            return ext
    return default


def _effective_threads(args) -> int:
    requested = args.threads if args.threads > 0 else 0
    cap = os.environ.get("CST_THREADS")
    if cap is not None:
        try:
            cap_val = int(cap)
        except ValueError:
            raise UsageError(f"CST_THREADS must be an integer, got {cap!r}") from None
        requested = min(requested, cap_val) if requested else cap_val
    return max(requested, 0)


def _scenario_meta(command: str, cfg: RunConfig) -> dict:
    meta: dict = {"command": command}
    if cfg.noise is not None:
        n = cfg.noise
        meta["noise"] = {"p0": float(n.p0), "p1": float(n.p1),
                         "p2": float(n.p2), "p3": float(n.p3)}
    if cfg.control is not None:
        meta["q0"] = float(cfg.control.q0)
    if cfg.measurement is not None:
        meta["theta"] = float(cfg.measurement.theta)
        meta["phi"] = float(cfg.measurement.phi)
    meta["input"] = {"theta0": float(cfg.input.theta0), "phi0": float(cfg.input.phi0)}
    meta["seed"] = cfg.seed
    meta["version"] = __version__
    return meta


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------

def _write_result_file(cfg: RunConfig, doc: dict,
                       csv_rows: tuple[list[str], list[list[str]]]) -> None:
    fmt = _resolve_format(cfg, "json")
    if fmt == "json":
        def body(handle):
            json.dump(doc, handle, indent=2)
            handle.write("\n")
    else:
        header, rows = csv_rows

        def body(handle):
            for key, value in doc["meta"].items():
                handle.write(f"# {key}: {value}\n")
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)

    atomic_write(cfg.out, body)
    print(f"wrote {cfg.out}")


def _branch_dict(r: analytic.TeleportResult | None):
    if r is None:
        return None
    return {"f_un": r.f_un, "prob": r.prob, "fidelity": r.fidelity}


def cmd_fidelity(args) -> int:
    cfg = _run_config(args)
    noise = cfg.require_noise()
    control = cfg.require_control()
    if cfg.measurement is None:
        raise UsageError("--theta is required for the fidelity command")

    result = analytic.evaluate(noise, control, cfg.measurement, cfg.input)
    try:
        orthogonal = analytic.evaluate_orthogonal(noise, control, cfg.measurement,
                                                  cfg.input)
    except NullProbabilityError:
        orthogonal = None

    print("measured branch:")
    print(f"  f_un     = {result.f_un:.12f}")
    print(f"  prob     = {result.prob:.12f}")
    print(f"  fidelity = {result.fidelity:.12f}")
    if orthogonal is not None:
        print("orthogonal branch:")
        print(f"  f_un     = {orthogonal.f_un:.12f}")
        print(f"  prob     = {orthogonal.prob:.12f}")
        print(f"  fidelity = {orthogonal.fidelity:.12f}")
    else:
        print("orthogonal branch: null probability (below 1e-12)")

    if cfg.out:
        doc = {"result": _branch_dict(result),
               "orthogonal": _branch_dict(orthogonal),
               "meta": _scenario_meta("fidelity", cfg)}
        rows = [["measured", f"{result.f_un:.12g}", f"{result.prob:.12g}",
                 f"{result.fidelity:.12g}"]]
        if orthogonal is not None:
            rows.append(["orthogonal", f"{orthogonal.f_un:.12g}",
                         f"{orthogonal.prob:.12g}", f"{orthogonal.fidelity:.12g}"])
        else:
            rows.append(["orthogonal", "null", "null", "null"])
        _write_result_file(cfg, doc, (["branch", "f_un", "prob", "fidelity"], rows))
    return 0


def cmd_optimize(args) -> int:
    cfg = _run_config(args)
    noise = cfg.require_noise()
    control = cfg.require_control()
    opt_cfg = OptimizeConfig(grid_points=args.grid, tolerance=args.tol)

    report = optimize_measurement(noise, control, cfg.input, opt_cfg)
    seed_cand = closed_form_candidate(control)
    try:
        seed_fid = analytic.evaluate(noise, control, seed_cand.measurement,
                                     cfg.input).fidelity
    except NullProbabilityError:
        seed_fid = None

    print("optimum:")
    print(f"  theta* = {report.theta_star:.12f}")
    print(f"  phi*   = {report.phi_star:.12f}")
    print(f"  f*     = {report.f_star:.12f}")
    print(f"  p*     = {report.p_star:.12f}")
    seed_txt = "null probability" if seed_fid is None else f"fidelity = {seed_fid:.12f}"
    flag = " (degenerate control)" if seed_cand.degenerate else ""
    print(f"closed-form seed: theta = {seed_cand.measurement.theta:.12f}, "
          f"phi = {seed_cand.measurement.phi:.12f}, {seed_txt}{flag}")
    if (report.excluded_best_fidelity is not None
            and report.excluded_best_fidelity > report.f_star):
        print(f"warning: {report.excluded_points} grid points below the probability "
              f"floor were excluded; best fidelity among them was "
              f"{report.excluded_best_fidelity:.12f} (not eligible as optimum)")

    if cfg.out:
        meta = _scenario_meta("optimize", cfg)
        meta["grid"] = args.grid
        doc = {"optimum": {"theta_star": report.theta_star,
                           "phi_star": report.phi_star,
                           "f_star": report.f_star,
                           "p_star": report.p_star,
                           "grid_points": report.grid_points,
                           "refinement_iterations": report.refinement_iterations},
               "closed_form_seed": {"theta": seed_cand.measurement.theta,
                                    "phi": seed_cand.measurement.phi,
                                    "fidelity": seed_fid,
                                    "degenerate": seed_cand.degenerate},
               "meta": meta}
        row = [f"{report.theta_star:.12g}", f"{report.phi_star:.12g}",
               f"{report.f_star:.12g}", f"{report.p_star:.12g}"]
        _write_result_file(cfg, doc,
                           (["theta_star", "phi_star", "f_star", "p_star"], [row]))
    return 0


def cmd_sweep(args) -> int:
    cfg = _run_config(args)
    fmt = _resolve_format(cfg, "csv")

    if args.kind == "contour":
        grid = contour_theta_phi(cfg.require_noise(), cfg.require_control(),
                                 cfg.input, args.resolution)
        outputs = [(grid, cfg.out or f"contour.{fmt}")]
    elif args.kind == "theta-curve":
        noise = cfg.require_noise()
        if args.q0_count < 2:
            raise UsageError("--q0-count must be >= 2")
        q0s = np.linspace(0.05, 0.95, args.q0_count)
        outputs = [(optimal_theta_curve(noise, cfg.input, q0s),
                    cfg.out or f"theta-curve.{fmt}")]
    else:
        if args.q0_count < 2 or args.p_count < 2:
            raise UsageError("--q0-count and --p-count must be >= 2")
        p_s = np.linspace(0.0, 1.0 / 3.0, args.p_count)
        q0s = np.linspace(0.05, 0.95, args.q0_count)
        f_grid, t_grid = surface_p_q0(cfg.input, p_s, q0s, threads=cfg.threads)
        base = cfg.out or f"surface.{fmt}"
        root, ext = os.path.splitext(base)
        outputs = [(f_grid, f"{root}-fstar{ext}"), (t_grid, f"{root}-theta{ext}")]

    for grid, path in outputs:
        grid.meta = {"command": "sweep", **grid.meta, "seed": cfg.seed, "format": fmt}
        write_grid(grid, path, fmt)
        print(f"wrote {path}")

    if args.kind == "contour":
        values = outputs[0][0].values
        nulls = int(np.isnan(values).sum())
        if nulls == values.size:
            print("summary: all cells null")
        else:
            grid = outputs[0][0]
            idx = np.unravel_index(np.nanargmax(values), values.shape)
            print(f"summary: max fidelity {values[idx]:.12f} at "
                  f"theta={grid.samples[0][idx[0]]:.12g} phi={grid.samples[1][idx[1]]:.12g} "
                  f"(prob {grid.probs[idx]:.12g}); {nulls} of {values.size} cells null")
    elif args.kind == "theta-curve":
        grid = outputs[0][0]
        print(f"summary: {grid.values.size} rows; theta* range "
              f"[{grid.values.min():.12g}, {grid.values.max():.12g}]")
    else:
        f_values = outputs[0][0].values
        print(f"summary: f* range [{f_values.min():.12g}, {f_values.max():.12g}]")
    return 0


def cmd_verify(args) -> int:
    cfg = _run_config(args)
    if args.draws < 1:
        raise UsageError("--draws must be >= 1")
    report = run_verification(args.draws, cfg.seed)

    print(f"verification battery: {report.draws} draws, seed {report.seed}")
    for suite in report.suites:
        status = "PASS" if suite.passed else "FAIL"
        print(f"{status}  {suite.name:<55s} max|dev| = {suite.max_dev:.3e} "
              f"(tol {suite.tolerance:.0e})")
    print("measured table Tr(s_i s_j rho s_i s_j), constant over rho:")
    for row in report.second_trace_table:
        print("   " + "  ".join(f"{v:+.0f}" for v in row))
    print(f"max deviation observed: {report.max_deviation:.3e}")
    print("all checks passed" if report.passed else "FAILURES detected")

    if cfg.out:
        doc = {"suites": [{"name": s.name, "max_dev": s.max_dev,
                           "tolerance": s.tolerance, "passed": s.passed}
                          for s in report.suites],
               "second_trace_table": report.second_trace_table.tolist(),
               "meta": {"command": "verify", "draws": report.draws,
                        "seed": report.seed, "version": __version__}}
        rows = [[s.name, f"{s.max_dev:.12g}", f"{s.tolerance:.12g}",
                 "pass" if s.passed else "fail"] for s in report.suites]
        _write_result_file(cfg, doc,
                           (["suite", "max_dev", "tolerance", "status"], rows))
    return 0 if report.passed else 1


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_normalize_argv(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "command", None) is None:
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NullProbabilityError as exc:
        print(f"degenerate scenario: {exc}", file=sys.stderr)
        return 3
    except AllPointsNullError as exc:
        print(f"degenerate scenario: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
