"""Command-line front end.

Subcommands: ``finite`` (exact chain analyses), ``bound`` (analytic bound
calculators), ``simulate`` (coupling Monte Carlo), ``verify`` (numeric drift
and overlap checks). Reports are JSON (stdout, or files under ``--output``)
with optional CSV curves; exact rationals are serialized as "p/q" strings.
Exit codes: 0 success, 2 usage or configuration error, 3 mathematical or
verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, presets
from .bounds import (
    minorization_bound,
    minorization_curve,
    optimize_drift_minorization,
    steps_to_threshold,
)
from .coupling import CouplingConfig, run_small_set_coupling, run_uniform_coupling
from .errors import InputError, MathError, McbError
from .finite_chain import (
    ProbVector,
    StochasticMatrix,
    build_grid_walk,
    eigen_bound,
    exact_tv_curve,
    minorization_pseudo,
    minorization_uniform,
    stationary,
)
from .kernels import (
    halfline_mixture_kernel,
    point_process_overlap,
    metropolis_rwm_laplace,
    verify_minorization_numeric,
    verify_univariate_drift,
)
from .kernels import scalars

_FLOAT_FMT = "%.17g"


def _float_str(x: float) -> str:
    return _FLOAT_FMT % float(x)


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("MCB_SEED")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise InputError(f"MCB_SEED must be an integer, got {env!r}") from exc
    return 0


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        rows, cols = text.lower().split("x")
        return int(rows), int(cols)
    except ValueError as exc:
        raise InputError(f"grid must look like 3x3, got {text!r}") from exc


def _parse_rational(text: str) -> Fraction:
    try:
        if "/" in text:
            return Fraction(text)
        return Fraction(float(text)).limit_denominator(10**12)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse {text!r} as a probability") from exc


def _load_model(args) -> tuple[StochasticMatrix, str]:
    if args.grid:
        rows, cols = _parse_grid(args.grid)
        return build_grid_walk(rows, cols), f"grid {rows}x{cols}"
    if args.matrix_file:
        try:
            data = json.loads(Path(args.matrix_file).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read matrix file: {exc}") from exc
        return StochasticMatrix.from_json_dict(data), f"file {args.matrix_file}"
    raise InputError("select a model with --grid RxC or --matrix-file PATH")


def _default_start(args, size: int) -> int:
    """0-based start state: --start is 1-based; grids default to the center."""
    if args.start is not None:
        state = args.start - 1
        if not 0 <= state < size:
            raise InputError(f"--start must be in 1..{size}")
        return state
    if args.grid:
        return size // 2  # center cell for odd-sized grids, near-center otherwise
    raise InputError("--start is required with --matrix-file")


class _Report:
    """Envelope plus optional CSV tables keyed by file stem suffix."""

    def __init__(self, command: str, analysis: str, config: dict, results: dict,
                 provenance: dict | None = None, warnings: list[str] | None = None):
        self.command = command
        self.analysis = analysis
        self.config = config
        self.results = results
        self.provenance = provenance
        self.warnings = warnings
        self.csv_tables: dict[str, tuple[list[str], list[list[str]]]] = {}

    @property
    def payload(self) -> dict:
        out = {
            "tool": "mcbounds",
            "version": __version__,
            "command": self.command,
            "analysis": self.analysis,
            "config": self.config,
            "results": self.results,
        }
        if self.provenance:
            out["provenance"] = self.provenance
        if self.warnings:
            out["warnings"] = self.warnings
        return out

    def add_csv(self, suffix: str, header: list[str], rows: list[list[str]]) -> None:
        self.csv_tables[suffix] = (header, rows)


def _emit(report: _Report, args) -> None:
    text = json.dumps(report.payload, indent=2, sort_keys=True) + "\n"
    fmt = getattr(args, "format", "json")
    if args.output is None:
        if fmt in ("csv", "both") and report.csv_tables:
            raise InputError("--format csv requires --output DIR")
        sys.stdout.write(text)
        return
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = f"{report.command}-{report.analysis}"
    if fmt in ("json", "both"):
        (outdir / f"{stem}.json").write_text(text)
    if fmt in ("csv", "both"):
        for suffix, (header, rows) in report.csv_tables.items():
            name = f"{stem}{suffix}.csv"
            lines = [",".join(header)]
            lines += [",".join(row) for row in rows]
            (outdir / name).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# finite


def _cmd_finite(args) -> tuple[_Report, int]:
    matrix, model_desc = _load_model(args)
    size = matrix.size
    config = {
        "model": model_desc,
        "analysis": args.analysis,
        "n0": args.n0,
        "delta": args.delta,
        "n_max": args.n_max,
    }
    provenance: dict = {}
    results: dict = {}
    report = _Report("finite", args.analysis, config, results, provenance)

    if args.analysis == "stationary":
        pi = stationary(matrix)
        results["pi"] = pi.as_strings()
        results["pi_float"] = [float(v) for v in pi]
        provenance["pi"] = "computed (exact elimination)"

    elif args.analysis == "eigen-bound":
        start = _default_start(args, size)
        target = (args.target - 1) if args.target is not None else start
        if not 0 <= target < size:
            raise InputError(f"--target must be in 1..{size}")
        config["start"] = start + 1
        config["target"] = target + 1
        eb = eigen_bound(matrix, ProbVector.delta(size, start), target)
        crossing = steps_to_threshold(eb.value, args.delta)
        results.update(
            {
                "coefficient": eb.coefficient,
                "rate": eb.rate,
                "eigenvalues": [{"re": v.real, "im": v.imag} for v in eb.eigenvalues],
                "modes": [
                    {
                        "eigenvalue": {"re": m.eigenvalue.real, "im": m.eigenvalue.imag},
                        "weight_at_target": m.weight,
                        "projection_norm": m.projection_norm,
                    }
                    for m in eb.modes
                ],
                "stationary_float": list(eb.stationary),
                "threshold_steps": crossing,
            }
        )
        provenance["coefficient"] = "computed (spectral expansion)"
        rows = [
            [str(n), _float_str(eb.value(n))] for n in range(crossing + 1)
        ]
        report.add_csv("-curve", ["n", "bound"], rows)

    elif args.analysis in ("minorization", "pseudo"):
        finder = minorization_uniform if args.analysis == "minorization" else minorization_pseudo
        cert = finder(matrix, args.n0)
        if cert is None:
            results["epsilon"] = None
            results["note"] = f"no overlap at lag {args.n0}"
        else:
            results["epsilon"] = str(cert.epsilon)
            results["epsilon_float"] = float(cert.epsilon)
            results["n0"] = cert.n0
            if cert.nu is not None:
                results["nu"] = cert.nu.as_strings()
            if cert.argmin_pairs is not None:
                results["argmin_pairs"] = [[i + 1, j + 1] for i, j in cert.argmin_pairs]
            crossing = steps_to_threshold(
                lambda n: float(minorization_bound(cert.epsilon, cert.n0, n)), args.delta
            )
            results["threshold_steps"] = crossing
            provenance["epsilon"] = "computed (exact search)"

    elif args.analysis == "tv-exact":
        start = _default_start(args, size)
        config["start"] = start + 1
        curve = exact_tv_curve(
            ProbVector.delta(size, start), matrix, args.n_max, threshold=args.delta
        )
        uniform_cert = minorization_uniform(matrix, args.n0)
        pseudo_cert = minorization_pseudo(matrix, args.n0)
        entries = []
        rows = []
        for n, tv in zip(curve.ns, curve.values):
            entry = {"n": n, "tv": str(tv), "tv_float": float(tv)}
            row = [str(n), _float_str(float(tv))]
            for label, cert in (("uniform", uniform_cert), ("pseudo", pseudo_cert)):
                if cert is not None:
                    bound = float(minorization_bound(cert.epsilon, cert.n0, n))
                    entry[f"bound_{label}"] = bound
                    row.append(_float_str(bound))
                else:
                    row.append("")
            entries.append(entry)
            rows.append(row)
        results["curve"] = entries
        results["crossing"] = curve.crossing
        report.add_csv("-curve", ["n", "tv", "bound_uniform", "bound_pseudo"], rows)

    return report, 0


# ---------------------------------------------------------------------------
# bound


def _cmd_bound(args) -> tuple[_Report, int]:
    if args.theorem == "t1":
        provenance = {"epsilon": "user"}
        if args.pointprocess:
            try:
                c, d = (float(v) for v in args.pointprocess.split(","))
            except ValueError as exc:
                raise InputError(
                    f"--pointprocess expects C,D, got {args.pointprocess!r}"
                ) from exc
            epsilon = point_process_overlap(c, d)
            provenance["epsilon"] = f"computed (overlap constant at C={c}, D={d})"
        else:
            epsilon = _parse_rational(args.epsilon)
        if not 0 < epsilon <= 1:
            raise InputError(f"epsilon must be in (0, 1], got {epsilon}")
        crossing = steps_to_threshold(
            lambda n: float(minorization_bound(epsilon, args.n0, n)), args.delta
        )
        n_max = args.n_max if args.n_max is not None else crossing
        curve = minorization_curve(epsilon, args.n0, n_max)
        config = {
            "epsilon": str(epsilon),
            "n0": args.n0,
            "delta": args.delta,
            "n_max": n_max,
            "pointprocess": args.pointprocess,
        }
        results = {
            "epsilon_float": float(epsilon),
            "crossing": crossing,
            "curve": [
                {"n": n, "bound": float(v)} for n, v in zip(curve.ns, curve.values)
            ],
        }
        report = _Report("bound", "t1", config, results, provenance)
        report.add_csv(
            "-curve",
            ["n", "bound"],
            [[str(n), _float_str(float(v))] for n, v in zip(curve.ns, curve.values)],
        )
        return report, 0

    # t2
    if args.preset != "rwm-laplace":
        raise InputError("bound t2 currently ships one preset: rwm-laplace")
    inputs, provenance = presets.laplace_drift_minorization_inputs(expected_h=args.expected_h)
    schedule = [(args.check_n, args.check_j)]
    opt = optimize_drift_minorization(inputs, args.delta, schedule=schedule)
    config = {
        "preset": args.preset,
        "delta": args.delta,
        "expected_h": args.expected_h,
        "check_n": args.check_n,
        "check_j": args.check_j,
    }
    sched = opt.inputs["schedule"][0]
    results = {
        "constants": {
            "lam": presets.LAPLACE_LAM,
            "b": presets.LAPLACE_B,
            "d": presets.LAPLACE_D,
            "epsilon": inputs.epsilon,
            "alpha_inv": 1.0 / inputs.alpha,
            "B": inputs.big_b,
            "expected_h": inputs.expected_h,
            "n0": inputs.n0,
        },
        "crossing": opt.crossing,
        "optimal_j": opt.inputs["optimal_j"],
        "bound_at_crossing": opt.value_at(opt.crossing),
        "log_bound_at_crossing": math.log(opt.value_at(opt.crossing)),
        "schedule_point": sched,
        "curve": [
            {"n": n, "j": j, "bound": v, "log_bound": lv}
            for n, j, v, lv in zip(opt.ns, opt.js, opt.values, opt.log_values)
        ],
    }
    report = _Report("bound", "t2", config, results, provenance)
    report.add_csv(
        "-curve",
        ["n", "j", "bound"],
        [[str(n), str(j), _float_str(v)] for n, j, v in zip(opt.ns, opt.js, opt.values)],
    )
    return report, 0


# ---------------------------------------------------------------------------
# simulate


def _simulate_config(args) -> tuple[CouplingConfig, dict, float, int]:
    seed = _resolve_seed(args.seed)
    if args.grid:
        rows, cols = _parse_grid(args.grid)
        matrix = build_grid_walk(rows, cols)
        finder = minorization_pseudo if args.cert == "pseudo" else minorization_uniform
        cert = finder(matrix, args.n0)
        if cert is None:
            raise MathError(f"no {args.cert} overlap at lag {args.n0} for this grid")
        start = args.start - 1 if args.start is not None else matrix.size // 2
        if not 0 <= start < matrix.size:
            raise InputError(f"--start must be in 1..{matrix.size}")
        config = CouplingConfig(
            model="finite",
            n_max=args.n_max,
            replications=args.reps,
            master_seed=seed,
            matrix=matrix,
            cert=cert,
            initial_law=ProbVector.delta(matrix.size, start),
            record_every=args.record_every,
            workers=args.workers,
        )
        desc = {
            "model": f"grid {rows}x{cols}",
            "cert": args.cert,
            "epsilon": str(cert.epsilon),
            "n0": cert.n0,
            "start": start + 1,
        }
        return config, desc, float(cert.epsilon), cert.n0
    if args.halfline:
        config = CouplingConfig(
            model="halfline",
            n_max=args.n_max,
            replications=args.reps,
            master_seed=seed,
            x0=args.x0,
            burn_in=args.burn_in,
            record_every=args.record_every,
            workers=args.workers,
        )
        desc = {"model": "halfline", "epsilon": presets.HALFLINE_EPSILON, "n0": 1,
                "x0": args.x0, "burn_in": args.burn_in}
        return config, desc, presets.HALFLINE_EPSILON, 1
    if args.rwm_laplace:
        config = CouplingConfig(
            model="rwm-laplace",
            n_max=args.n_max,
            replications=args.reps,
            master_seed=seed,
            x0=args.x0,
            burn_in=args.burn_in,
            record_every=args.record_every,
            workers=args.workers,
        )
        desc = {"model": "rwm-laplace", "epsilon": presets.LAPLACE_EPSILON, "n0": 2,
                "x0": args.x0, "burn_in": args.burn_in,
                "small_set": [-2.0, 2.0]}
        return config, desc, presets.LAPLACE_EPSILON, 2
    raise InputError("select --grid RxC, --halfline, or --rwm-laplace")


def _cmd_simulate(args) -> tuple[_Report, int]:
    config, desc, epsilon, n0 = _simulate_config(args)
    if config.model == "finite":
        runner = run_uniform_coupling
        if set(config.cert.small_set) != set(range(config.matrix.size)):
            runner = run_small_set_coupling
    elif config.model == "halfline":
        runner = run_uniform_coupling
    else:
        runner = run_small_set_coupling
    result = runner(config)

    warnings = []
    for n, p, se in zip(result.lattice, result.p_neq, result.p_neq_se):
        bound = (1.0 - epsilon) ** (n // n0)
        if p > bound + 3.0 * se:
            warnings.append(
                f"empirical non-coupling {p:.6g} at n={n} exceeds the analytic "
                f"bound {bound:.6g} by more than 3 standard errors (simulation "
                "noise, not a tool failure)"
            )

    cfg = dict(desc)
    cfg.update(
        {
            "n_max": args.n_max,
            "replications": args.reps,
            "master_seed": config.master_seed,
            "workers": args.workers,
            "record_every": args.record_every,
        }
    )
    results = result.to_jsonable()
    results["bound_curve"] = [
        {"n": n, "bound": (1.0 - epsilon) ** (n // n0)} for n in result.lattice
    ]
    report = _Report("simulate", desc["model"].split()[0], cfg, results,
                     warnings=warnings)
    rows = [
        [str(n), _float_str(p), _float_str(se), _float_str((1 - epsilon) ** (n // n0))]
        for n, p, se in zip(result.lattice, result.p_neq, result.p_neq_se)
    ]
    report.add_csv("-curve", ["n", "p_neq", "p_neq_se", "bound"], rows)

    if args.trajectories:
        _dump_trajectories(Path(args.trajectories), result)
    return report, 0


def _dump_trajectories(path: Path, result) -> None:
    lines = ["replication,n,x,x_prime,coupled"]
    xs, xps = result.xs, result.xps
    as_str = (
        (lambda v: str(int(v))) if np.issubdtype(xs.dtype, np.integer) else _float_str
    )
    for r in range(xs.shape[0]):
        coupled = False
        for k, n in enumerate(result.lattice):
            coupled = coupled or xs[r, k] == xps[r, k]
            lines.append(
                f"{r},{n},{as_str(xs[r, k])},{as_str(xps[r, k])},{int(coupled)}"
            )
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# verify


def _cmd_verify(args) -> tuple[_Report, int]:
    if args.condition == "drift":
        if args.preset != "rwm-laplace":
            raise InputError("drift verification ships one preset: rwm-laplace")
        kernel, _ = metropolis_rwm_laplace()
        lam = args.lam if args.lam is not None else presets.LAPLACE_LAM
        b = args.b if args.b is not None else presets.LAPLACE_B
        drift = presets.laplace_drift(lam=lam, b=b)
        grid = np.arange(args.grid_lo, args.grid_hi + 1e-12, args.grid_step)
        verif = verify_univariate_drift(kernel, drift, grid, tolerance=args.tolerance)
        config = {
            "preset": args.preset,
            "lam": lam,
            "b": b,
            "grid": [args.grid_lo, args.grid_hi, args.grid_step],
            "tolerance": args.tolerance,
        }
        results = {
            "passed": verif.passed,
            "max_violation": verif.max_violation,
            "quadrature_error_estimate": verif.quadrature_error_estimate,
            "drift_function": "exp(|x|/2)",
            "small_set": [drift.small_set.lo, drift.small_set.hi],
        }
        provenance = {
            "lam": "user" if args.lam is not None else "preset",
            "b": "user" if args.b is not None else "preset",
        }
        report = _Report("verify", "drift", config, results, provenance)
        rows = [
            [_float_str(x), _float_str(l), _float_str(r)]
            for x, l, r in zip(verif.grid, verif.lhs, verif.rhs)
        ]
        report.add_csv("-grid", ["x", "lhs", "rhs"], rows)
        return report, 0 if verif.passed else 3

    # minorization
    if args.preset == "halfline":
        kernel = halfline_mixture_kernel()
        lag = 1
        epsilon = presets.HALFLINE_EPSILON
        nu = scalars.hl_nu_density
        probe_x = np.arange(0.0, 50.0 + 1e-12, args.probe_step)
        probe_y = probe_x
        nu_desc = "2*exp(-2y)"
    elif args.preset == "rwm-laplace":
        kernel, _ = metropolis_rwm_laplace()
        lag = 2
        epsilon = presets.LAPLACE_EPSILON
        nu = presets.laplace_nu_density
        probe_x = np.arange(-2.0, 2.0 + 1e-12, args.probe_step)
        probe_y = np.arange(-1.0, 1.0 + 1e-12, args.probe_step)
        nu_desc = "half of Lebesgue on [-1,1]"
    else:
        raise InputError("minorization presets: halfline, rwm-laplace")
    verif = verify_minorization_numeric(
        kernel, lag, epsilon, nu, probe_x, probe_y, tolerance=args.tolerance
    )
    config = {
        "preset": args.preset,
        "probe_step": args.probe_step,
        "tolerance": args.tolerance,
    }
    results = {
        "passed": verif.passed,
        "lag": lag,
        "epsilon": epsilon,
        "nu": nu_desc,
        "min_margin": verif.min_margin,
        "argmin": [verif.argmin_x, verif.argmin_y],
        "quadrature_error_estimate": verif.quadrature_error_estimate,
    }
    report = _Report(
        "verify", "minorization", config, results, {"epsilon": "preset"}
    )
    return report, 0 if verif.passed else 3


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcbounds",
        description="Quantitative convergence bounds for Markov chains.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("--output", help="directory for report files (default: stdout)")
        p.add_argument(
            "--format", choices=["json", "csv", "both"], default="json",
            help="report format; csv requires --output",
        )

    p = sub.add_parser("finite", help="exact finite-chain analyses")
    p.add_argument(
        "analysis",
        choices=["stationary", "eigen-bound", "minorization", "pseudo", "tv-exact"],
    )
    p.add_argument("--grid", help="grid model, e.g. 3x3")
    p.add_argument("--matrix-file", help="JSON matrix file with 'p/q' entries")
    p.add_argument("--n0", type=int, default=1, help="transition lag (default 1)")
    p.add_argument("--start", type=int, help="1-based start state (grids: center)")
    p.add_argument("--target", type=int, help="1-based target state for eigen-bound")
    p.add_argument("--delta", type=float, default=0.01, help="threshold (default 0.01)")
    p.add_argument(
        "--n-max", "--n", dest="n_max", type=int, default=30,
        help="curve length for tv-exact (default 30)",
    )
    add_output(p)
    p.set_defaults(func=_cmd_finite)

    p = sub.add_parser("bound", help="analytic bound calculators")
    p.add_argument("theorem", choices=["t1", "t2"], help="t1: geometric overlap bound; t2: drift/overlap two-term bound")
    p.add_argument("--epsilon", help="overlap constant for t1 (float or p/q)")
    p.add_argument(
        "--pointprocess", metavar="C,D",
        help="derive the t1 overlap constant from the particle-chain parameters",
    )
    p.add_argument("--n0", type=int, default=1, help="lag for t1 (default 1)")
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--n-max", type=int, help="extend the t1 curve to this n")
    p.add_argument("--preset", default="rwm-laplace", help="t2 constant preset")
    p.add_argument(
        "--expected-h", choices=["analytic", "fallback"], default="analytic",
        help="use the analytic stationary mean of h or the moment-bound fallback",
    )
    p.add_argument("--check-n", type=int, default=presets.LAPLACE_SCHEDULE[0],
                   help="regression point: n")
    p.add_argument("--check-j", type=int, default=presets.LAPLACE_SCHEDULE[1],
                   help="regression point: j")
    add_output(p)
    p.set_defaults(func=_cmd_bound_dispatch)

    p = sub.add_parser("simulate", help="coupling Monte Carlo")
    p.add_argument("--grid", help="finite grid model, e.g. 3x3")
    p.add_argument("--halfline", action="store_true")
    p.add_argument("--rwm-laplace", action="store_true")
    p.add_argument("--cert", choices=["uniform", "pseudo"], default="pseudo",
                   help="certificate for finite models (default pseudo)")
    p.add_argument("--n0", type=int, default=2, help="lag for finite certificates")
    p.add_argument("--start", type=int, help="1-based start state for finite models")
    p.add_argument("--x0", type=float, default=0.0, help="start point, continuous models")
    p.add_argument("--n-max", type=int, default=60)
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--seed", type=int, help="master seed (fallback: MCB_SEED, then 0)")
    p.add_argument("--workers", type=int, default=0, help="0 = all available")
    p.add_argument("--burn-in", type=int, default=20_000,
                   help="auxiliary-chain steps for the stationary start (continuous)")
    p.add_argument("--record-every", type=int, default=1,
                   help="record every k-th lattice point")
    p.add_argument("--trajectories", help="write per-trajectory CSV to this path")
    add_output(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="numeric drift/overlap verification")
    p.add_argument("condition", choices=["drift", "minorization"])
    p.add_argument("--preset", default="rwm-laplace",
                   help="drift: rwm-laplace; minorization: halfline or rwm-laplace")
    p.add_argument("--lam", type=float, help="override the drift rate")
    p.add_argument("--b", type=float, help="override the drift offset")
    p.add_argument("--grid-lo", type=float, default=-10.0)
    p.add_argument("--grid-hi", type=float, default=10.0)
    p.add_argument("--grid-step", type=float, default=0.05)
    p.add_argument("--probe-step", type=float, default=0.05)
    p.add_argument("--tolerance", type=float, default=1e-6)
    add_output(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def _cmd_bound_dispatch(args):
    if args.theorem == "t1" and not (args.epsilon or args.pointprocess):
        raise InputError("bound t1 requires --epsilon or --pointprocess C,D")
    return _cmd_bound(args)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.func(args)
        _emit(report, args)
        return code
    except InputError as exc:
        print(f"mcbounds: error: {exc}", file=sys.stderr)
        return 2
    except McbError as exc:
        print(f"mcbounds: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
