"""Command-line front end: exact values, bounds, and reproducible experiments.

Subcommands
-----------
mfet          exact mean exit time, Brownian closed form, their ratio, and
              (for theta > 0) the four closed-form bounds, as CSV or JSON.
bounds        alias of ``mfet`` that requires theta > 0.
scaling       table of exact value, bounds and a Monte-Carlo estimate over a
              doubling grid of dimensions (the bound-scaling experiment).
trajectories  coupled radius-vs-time traces of the mean-reverting process
              and the matching driftless one, per dimension.
drift-ratio   drift of the squared radial process relative to its driftless
              counterpart on a radius grid.
selftest      built-in invariant suite; exit code 1 on the first violation.

Every run that writes to a file also writes ``<file>.manifest.json`` with
the command, all parameter values, the seed and the tool version, so the
output can be regenerated exactly.  Exit codes: 0 success, 1 selftest
failure, 2 usage error, 3 numerical failure.
"""

import argparse
import contextlib
import json
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone

from . import __version__, special
from .errors import (
    ConvergenceError,
    DomainError,
    EstimationError,
    EvaluationError,
    QuadratureError,
)
from .mfet import ExitProblem, OupParams, drift_ratio, mfet_bm, mfet_bounds, mfet_exact
from .quadrature import QuadConfig
from .selftest import run_selftest
from .simulate import McConfig, Scheme, estimate_mfet, record_path

DEFAULT_SEED = 123456789
_D_CAP = 2**20

_MFET_COLUMNS = (
    "d", "L", "x", "sigma", "theta", "lambda", "regime",
    "mfet_exact", "mfet_bm", "ratio",
    "lower_bm", "lower_exp", "upper_mixed", "upper_exp",
)
_SCALING_COLUMNS = (
    "d", "mfet_exact", "lower_bm", "lower_exp", "upper_mixed", "upper_exp",
    "mc_mean", "mc_stderr", "n_censored",
)
_TRAJ_COLUMNS = ("d", "theta", "t", "radius", "exited")
_DRIFT_COLUMNS = ("d", "rho", "ratio")


@dataclass
class RunManifest:
    """Everything needed to regenerate an output file bit-for-bit."""

    command: str
    parameters: dict
    seed: int
    tool_version: str
    started: str
    finished: str


def _now():
    return datetime.now(timezone.utc).isoformat()


def _fmt(v):
    """Shortest round-trip serialization; empty cell for missing values."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv_line(values):
    return ",".join(_fmt(v) for v in values) + "\n"


@contextlib.contextmanager
def _out_stream(path):
    if path:
        fh = open(path, "w", newline="\n")
        try:
            yield fh
        finally:
            fh.close()
    else:
        yield sys.stdout


def _write_manifest(args, started):
    if not args.output:
        return
    params = {k: (v.value if isinstance(v, Scheme) else v)
              for k, v in vars(args).items() if k != "func"}
    manifest = RunManifest(
        command=args.command,
        parameters=params,
        seed=getattr(args, "seed", DEFAULT_SEED),
        tool_version=__version__,
        started=started,
        finished=_now(),
    )
    with open(args.output + ".manifest.json", "w", newline="\n") as fh:
        json.dump(asdict(manifest), fh, indent=2)
        fh.write("\n")


def _check_dimension(d, allow_huge):
    if d > _D_CAP and not allow_huge:
        raise DomainError(
            f"d={d} exceeds the CLI cap of 2**20; pass --allow-huge-d to override"
        )


def _parse_int_list(text):
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise DomainError(f"expected a comma-separated integer list, got {text!r}") from None


# ---------------------------------------------------------------------------
# mfet / bounds

def _mfet_record(args):
    _check_dimension(args.d, args.allow_huge_d)
    params = OupParams(theta=args.theta, sigma=args.sigma, d=args.d)
    prob = ExitProblem(params=params, L=args.L, x=args.x)
    cfg = QuadConfig(rel_tol=args.rel_tol, max_panels=args.max_panels)
    exact = mfet_exact(prob, cfg)
    bm = mfet_bm(prob)
    if args.theta > 0:
        regime = "recurrent"
    elif args.theta == 0:
        regime = "brownian"
    else:
        regime = "transient"
    rec = {
        "d": args.d, "L": args.L, "x": args.x,
        "sigma": args.sigma, "theta": args.theta, "lambda": params.lam,
        "regime": regime,
        "mfet_exact": exact, "mfet_bm": bm,
        "ratio": exact / bm if args.x < args.L else None,
        "lower_bm": None, "lower_exp": None, "upper_mixed": None, "upper_exp": None,
    }
    if args.theta > 0:
        b = mfet_bounds(prob)
        rec.update(lower_bm=b.lower_bm, lower_exp=b.lower_exp,
                   upper_mixed=b.upper_mixed, upper_exp=b.upper_exp)
    return rec


def cmd_mfet(args):
    if args.command == "bounds" and not args.theta > 0:
        raise DomainError("the bounds command requires theta > 0")
    started = _now()
    rec = _mfet_record(args)
    with _out_stream(args.output) as out:
        if args.format == "json":
            out.write(json.dumps(rec, indent=2) + "\n")
        else:
            out.write(_csv_line(_MFET_COLUMNS))
            out.write(_csv_line([rec[c] for c in _MFET_COLUMNS]))
    _write_manifest(args, started)
    return 0


# ---------------------------------------------------------------------------
# scaling

def _power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


def cmd_scaling(args):
    if not (_power_of_two(args.d_min) and _power_of_two(args.d_max)):
        raise DomainError("--d-min and --d-max must be powers of two")
    if args.d_min > args.d_max:
        raise DomainError("--d-min must not exceed --d-max")
    _check_dimension(args.d_max, args.allow_huge_d)
    started = _now()
    lam = args.lam
    scheme = Scheme(args.scheme)
    with _out_stream(args.output) as out:
        out.write(_csv_line(_SCALING_COLUMNS))
        d = args.d_min
        while d <= args.d_max:
            params = OupParams(theta=lam * args.sigma * args.sigma, sigma=args.sigma, d=d)
            prob = ExitProblem(params=params, L=args.L, x=args.x)
            exact = mfet_exact(prob)
            lower_bm = mfet_bm(prob)
            if lam > 0:
                b = mfet_bounds(prob)
                lower_exp, upper_mixed, upper_exp = b.lower_exp, b.upper_mixed, b.upper_exp
            else:
                lower_exp = upper_mixed = upper_exp = None
            # Safety horizon well past the analytic mean so censoring is a
            # pathology report, not a routine truncation of the estimate.
            t_max = max(50.0 * exact, 1e6 * args.dt)
            est = estimate_mfet(prob, McConfig(
                n_paths=args.paths, dt=args.dt, seed=args.seed,
                scheme=scheme, t_max=t_max,
            ))
            out.write(_csv_line([
                d, exact, lower_bm, lower_exp, upper_mixed, upper_exp,
                est.mean, est.std_err, est.n_censored,
            ]))
            out.flush()
            d *= 2
    _write_manifest(args, started)
    return 0


# ---------------------------------------------------------------------------
# trajectories

def cmd_trajectories(args):
    dims = _parse_int_list(args.d)
    for d in dims:
        _check_dimension(d, args.allow_huge_d)
    started = _now()
    with _out_stream(args.output) as out:
        out.write(_csv_line(_TRAJ_COLUMNS))
        for d in dims:
            for theta_run in (args.theta, 0.0):
                params = OupParams(theta=theta_run, sigma=args.sigma, d=d)
                prob = ExitProblem(params=params, L=args.L, x=0.0)
                cfg = McConfig(n_paths=1, dt=args.dt, seed=args.seed,
                               scheme=Scheme.FULL_EULER)
                rec = record_path(prob, cfg, 0, stride=args.stride)
                for t, r in zip(rec.times, rec.radii):
                    out.write(_csv_line([d, theta_run, float(t), float(r),
                                         1 if r >= args.L else 0]))
                out.flush()
    _write_manifest(args, started)
    return 0


# ---------------------------------------------------------------------------
# drift-ratio

def cmd_drift_ratio(args):
    dims = _parse_int_list(args.d_list)
    rho_max = args.rho_max if args.rho_max is not None else args.L
    if not rho_max > 0:
        raise DomainError(f"--rho-max must be positive, got {rho_max!r}")
    if args.rho_points < 2:
        raise DomainError(f"--rho-points must be >= 2, got {args.rho_points!r}")
    started = _now()
    with _out_stream(args.output) as out:
        out.write(_csv_line(_DRIFT_COLUMNS))
        for d in dims:
            params = OupParams(theta=args.theta, sigma=args.sigma, d=d)
            for k in range(args.rho_points):
                rho = rho_max * k / (args.rho_points - 1)
                out.write(_csv_line([d, rho, drift_ratio(params, rho)]))
    _write_manifest(args, started)
    return 0


# ---------------------------------------------------------------------------
# selftest

def cmd_selftest(args):
    ln_lig = None
    if args.corrupt_gamma:
        # fault-injection hook for testing the selftest itself
        def ln_lig(a, x):
            return special.ln_lower_gamma(a, x) + 0.05
    ok, first_failure = run_selftest(fast=args.fast, ln_lig=ln_lig)
    if not ok:
        print(f"FAILED: {first_failure}")
        return 1
    print("all checks passed")
    return 0


# ---------------------------------------------------------------------------
# parser

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ouexit",
        description="Mean first-exit times of d-dimensional Ornstein-Uhlenbeck processes",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", default=None, help="output path (default stdout)")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--threads", type=int, default=1,
                        help="parallelism hint; affects speed only, never results")
        sp.add_argument("--allow-huge-d", action="store_true",
                        help="lift the d <= 2**20 cap")

    for name in ("mfet", "bounds"):
        sp = sub.add_parser(name, help="exact value, Brownian form, ratio, bounds")
        sp.add_argument("--d", type=int, required=True)
        sp.add_argument("--L", type=float, required=True)
        sp.add_argument("--x", type=float, required=True)
        sp.add_argument("--sigma", type=float, required=True)
        sp.add_argument("--theta", type=float, required=True)
        sp.add_argument("--rel-tol", type=float, default=1e-10)
        sp.add_argument("--max-panels", type=int, default=4096)
        add_common(sp)
        sp.set_defaults(func=cmd_mfet)

    sp = sub.add_parser("scaling", help="bounds and MC estimates over doubling dimensions")
    sp.add_argument("--d-min", type=int, default=2)
    sp.add_argument("--d-max", type=int, default=256)
    sp.add_argument("--L", type=float, default=4.0)
    sp.add_argument("--x", type=float, default=0.0)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--lambda", dest="lam", type=float, default=0.5)
    sp.add_argument("--paths", type=int, default=100)
    sp.add_argument("--dt", type=float, default=0.001)
    sp.add_argument("--scheme", choices=[s.value for s in Scheme],
                    default=Scheme.SQUARED_RADIAL_EULER.value)
    add_common(sp)
    sp.set_defaults(func=cmd_scaling)

    sp = sub.add_parser("trajectories", help="coupled OUP/BM radius traces")
    sp.add_argument("--d", default="2,10,1000", help="comma-separated dimensions")
    sp.add_argument("--L", type=float, default=2.5)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--theta", type=float, default=0.7)
    sp.add_argument("--dt", type=float, default=0.001)
    sp.add_argument("--stride", type=int, default=1)
    add_common(sp)
    sp.set_defaults(func=cmd_trajectories)

    sp = sub.add_parser("drift-ratio", help="squared-radial drift relative to the driftless case")
    sp.add_argument("--theta", type=float, default=0.7)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--L", type=float, default=3.0)
    sp.add_argument("--rho-max", type=float, default=None, help="default: L")
    sp.add_argument("--rho-points", type=int, default=101)
    sp.add_argument("--d-list", default="2,4,8,16,32,64,128")
    add_common(sp)
    sp.set_defaults(func=cmd_drift_ratio)

    sp = sub.add_parser("selftest", help="run the built-in invariant suite")
    sp.add_argument("--fast", action="store_true", help="reduced grids, completes in under a minute")
    sp.add_argument("--corrupt-gamma", action="store_true", help=argparse.SUPPRESS)
    add_common(sp)
    sp.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureError, ConvergenceError, EvaluationError, EstimationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
