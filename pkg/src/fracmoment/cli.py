"""Command-line front end.

Subcommands: ``moment``, ``guesswork``, ``estimation``, ``cauchy``,
``jamming``.  Single-point runs print one JSON record; sweep runs print
CSV with a header row and can additionally render the sweep as a figure
(``--plot``).  ``--verify`` runs the matching brute-force oracle
side-by-side and appends its columns without touching primary values.

Exit codes: 0 success, 1 usage or domain error, 2 quadrature
non-convergence.  Quadrature settings come from defaults, then the
key=value file named by FRACMOMENT_CONFIG, then flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import estimation, frac_moment, guesswork, jamming, oracles
from . import cauchy_renyi
from .quadrature import QuadratureConfig, QuadratureNonConvergence
from .special import CONSTANTS

CONFIG_ENV = "FRACMOMENT_CONFIG"
_CONFIG_KEYS = ("rel_tol", "abs_tol", "max_subdivisions", "format", "units")


@dataclass(frozen=True)
class RunConfig:
    """Shared run contract: quadrature settings plus presentation choices.

    ``output_format`` of None keeps the mode default (JSON for single
    points, CSV for sweeps).  Units conversion happens only at print time;
    everything internal stays in nats.
    """

    quadrature: QuadratureConfig
    output_format: str | None
    output_path: str | None
    verify: bool
    units: str

    def __post_init__(self):
        if self.output_format not in (None, "json", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if self.units not in ("nats", "bits"):
            raise ValueError(f"unknown units {self.units!r}")


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the CLI contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load_config_file():
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    settings = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#") or "=" not in line:
                    continue
                key, _, value = line.partition("=")
                key = key.strip()
                if key in _CONFIG_KEYS:
                    settings[key] = value.strip()
    except OSError as exc:
        raise SystemExit(f"cannot read config file {path}: {exc}")
    return settings


def _add_global_flags(parser, suppress):
    """Shared flags, valid both before and after the subcommand."""
    d = argparse.SUPPRESS if suppress else None
    flag = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--rel-tol", type=float, default=d)
    parser.add_argument("--abs-tol", type=float, default=d)
    parser.add_argument("--max-subdivisions", type=int, default=d)
    parser.add_argument("--format", choices=("json", "csv"), default=d)
    parser.add_argument("--out", default=d, help="write output to this file")
    parser.add_argument("--plot", default=d, help="render sweep figure to this file")
    parser.add_argument("--verify", action="store_true", **flag,
                        help="run the matching oracle side-by-side")
    parser.add_argument("--units", choices=("nats", "bits"), default=d)
    parser.add_argument("--seed", type=int,
                        default=argparse.SUPPRESS if suppress else 1234)
    parser.add_argument("--mc-samples", type=int,
                        default=argparse.SUPPRESS if suppress else 200_000)


def build_parser():
    parser = _Parser(prog="fracmoment", description=__doc__)
    _add_global_flags(parser, suppress=False)
    common = _Parser(add_help=False)
    _add_global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moment", parents=[common],
                       help="fractional moment of a built-in family")
    p.add_argument("--dist", required=True,
                   help="const:<c> | exp1 | geom:<p> | discrete:<json>")
    p.add_argument("--rho", type=float, required=True)

    p = sub.add_parser("guesswork", parents=[common],
                       help="moments of randomized guessing")
    p.add_argument("--source-p", required=True, help="comma-separated probabilities")
    p.add_argument("--guess-p", required=True, help="comma-separated probabilities")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--conditional", type=int, default=None, metavar="INDEX",
                   help="condition on one symbol instead of averaging")

    p = sub.add_parser("estimation", parents=[common],
                       help="error moments of the empirical mean")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--bound", action="store_true", help="add the closed-form bound")
    p.add_argument("--sweep", choices=("theta", "n"), default=None)
    p.add_argument("--grid", default=None, help="comma-separated sweep values")

    p = sub.add_parser("cauchy", parents=[common],
                       help="Renyi entropy of the power-law family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta-exp", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--sweep", choices=("alpha",), default=None)
    p.add_argument("--grid", default=None, help="comma-separated alpha values")

    p = sub.add_parser("jamming", parents=[common],
                       help="mutual information with one jammed symbol")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sweep", choices=("epsilon", "n"), default=None)
    p.add_argument("--grid", default=None, help="comma-separated sweep values")

    return parser


def _quad_config(args, config_file):
    rel = args.rel_tol
    if rel is None:
        rel = float(config_file.get("rel_tol", 1e-10))
    abs_ = args.abs_tol
    if abs_ is None:
        abs_ = float(config_file.get("abs_tol", 1e-12))
    subdiv = args.max_subdivisions
    if subdiv is None:
        subdiv = int(config_file.get("max_subdivisions", 2000))
    return QuadratureConfig(rel_tol=rel, abs_tol=abs_, max_subdivisions=subdiv)


def _fmt(x):
    if isinstance(x, float):
        return float(f"{x:.10g}")
    return x


def _nats_to_units(value, units):
    return value / CONSTANTS.ln2 if units == "bits" else value


def _json_text(rows):
    payload = [{k: _fmt(v) for k, v in row.items()} for row in rows]
    if len(payload) == 1:
        return json.dumps(payload[0]) + "\n"
    return json.dumps(payload, indent=1) + "\n"


def _csv_text(rows):
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(v) for k, v in row.items()})
    return buffer.getvalue()


def _emit_record(record, run):
    fmt = run.output_format or "json"
    text = _json_text([record]) if fmt == "json" else _csv_text([record])
    _write_output(text, run.output_path)


def _emit_rows(rows, run):
    fmt = run.output_format or "csv"
    text = _csv_text(rows) if fmt == "csv" else _json_text(rows)
    _write_output(text, run.output_path)


def _write_output(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_probs(text):
    return tuple(float(v) for v in text.split(","))


def _parse_grid(text, cast):
    return [cast(v) for v in text.split(",")]


def _moment_spec(dist, seed):
    """(MgfSpec, oracle callable or None) for the built-in families."""
    if dist == "exp1":
        spec = frac_moment.mgf_exponential()

        def oracle(rho, args):
            est, _ = oracles.monte_carlo_moment(
                lambda rng, m: rng.exponential(1.0, m), rho,
                args.mc_samples, args.seed,
            )
            return est

        return spec, oracle
    if dist.startswith("const:"):
        c = float(dist.partition(":")[2])
        spec = frac_moment.mgf_constant(c)
        rv = oracles.DiscreteRv((c,), (1.0,))
        return spec, lambda rho, args: oracles.exact_moment(rv, rho)
    if dist.startswith("geom:"):
        p = float(dist.partition(":")[2])
        if not 0.0 < p <= 1.0:
            raise ValueError(f"geometric parameter must lie in (0, 1], got {p}")
        moments = tuple(
            guesswork.geometric_raw_moment(p, k) for k in range(13)
        )
        spec = frac_moment.MgfSpec(
            lambda u: guesswork.geometric_mgf_neg(p, u), moments, f"geom:{p}"
        )
        # A source concentrated on one symbol guessed with probability p.
        problem = guesswork.GuessProblem((1.0, 0.0), (p, 1.0 - p))
        return spec, lambda rho, args: oracles.guesswork_series(problem, rho)
    if dist.startswith("discrete:"):
        payload = json.loads(dist.partition(":")[2])
        spec = frac_moment.mgf_discrete(payload["support"], payload["probs"])
        rv = oracles.DiscreteRv(tuple(payload["support"]), tuple(payload["probs"]))
        return spec, lambda rho, args: oracles.exact_moment(rv, rho)
    raise ValueError(f"unknown distribution {dist!r}")


def _cmd_moment(args, run):
    spec, oracle = _moment_spec(args.dist, args.seed)
    value = frac_moment.fractional_moment(
        spec, frac_moment.MomentRequest(args.rho, run.quadrature)
    )
    record = {"dist": args.dist, "rho": args.rho, "value": value}
    if run.verify and oracle is not None:
        ref = oracle(args.rho, args)
        record["oracle"] = ref
        record["abs_diff"] = abs(value - ref)
    _emit_record(record, run)
    return 0


def _cmd_guesswork(args, run):
    problem = guesswork.GuessProblem(
        _parse_probs(args.source_p), _parse_probs(args.guess_p)
    )
    if args.conditional is not None:
        ptilde = problem.guess_p[args.conditional]
        value = guesswork.guess_moment_conditional(ptilde, args.rho, run.quadrature)
        record = {"symbol": args.conditional, "rho": args.rho, "value": value}
    else:
        value = guesswork.guess_moment_averaged(problem, args.rho, run.quadrature)
        record = {"rho": args.rho, "value": value}
        if run.verify:
            ref = oracles.guesswork_series(problem, args.rho)
            record["oracle"] = ref
            record["abs_diff"] = abs(value - ref)
    _emit_record(record, run)
    return 0


def _estimation_point(n, theta, rho, args, run):
    est = estimation.BernoulliEstimation(n, theta, rho)
    row = {"n": n, "theta": theta, "rho": rho,
           "moment": estimation.error_moment(est, run.quadrature)}
    if args.bound or args.sweep:
        row["bound"] = estimation.chernoff_bound(est)
    if run.verify:
        ref = oracles.binomial_error_moment(est)
        row["oracle"] = ref
        row["verify_abs_diff"] = abs(row["moment"] - ref)
    return row


def _cmd_estimation(args, run):
    if args.sweep is None:
        _emit_record(_estimation_point(args.n, args.theta, args.rho, args, run), run)
        return 0
    if args.sweep == "theta":
        grid = (
            _parse_grid(args.grid, float)
            if args.grid
            else [round(0.05 * i, 2) for i in range(21)]
        )
        rows = [_estimation_point(args.n, th, args.rho, args, run) for th in grid]
        x_col = "theta"
    else:
        grid = (
            _parse_grid(args.grid, int)
            if args.grid
            else [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000]
        )
        rows = [_estimation_point(n, args.theta, args.rho, args, run) for n in grid]
        x_col = "n"
    _emit_rows(rows, run)
    if args.plot:
        from .plots import render_sweep

        render_sweep(
            rows, x_col, args.plot,
            ylabel=f"error moment, rho={args.rho}",
            title="empirical-mean error moment vs bound",
            logx=(x_col == "n"), logy=True,
        )
    return 0


def _cmd_cauchy(args, run):
    def point(alpha):
        fam = cauchy_renyi.CauchyFamily(args.n, args.theta_exp, args.q, alpha)
        row = {
            "n": args.n, "theta_exp": args.theta_exp, "q": args.q, "alpha": alpha,
            "entropy": _nats_to_units(
                cauchy_renyi.renyi_entropy(fam, run.quadrature), run.units
            ),
        }
        if run.verify:
            if args.n > 2:
                raise ValueError("verification oracle supports n in {1, 2} only")
            ref = _nats_to_units(oracles.direct_renyi(fam), run.units)
            row["oracle"] = ref
            row["verify_abs_diff"] = abs(row["entropy"] - ref)
        return row

    if args.sweep is None:
        _emit_record(point(args.alpha), run)
        return 0
    grid = _parse_grid(args.grid, float) if args.grid else [0.5, 0.75, 1.5, 2.0, 3.0, 5.0]
    rows = [point(a) for a in grid]
    _emit_rows(rows, run)
    if args.plot:
        from .plots import render_sweep

        render_sweep(rows, "alpha", args.plot,
                     ylabel=f"entropy ({run.units})",
                     title="Renyi entropy vs order")
    return 0


def _jamming_point(delta, epsilon, n, run):
    spec = jamming.BscJamSpec(delta, epsilon, n)
    i_q = jamming.bsc_jamming_free_mi(spec)
    i_p = jamming.bsc_mutual_information(spec, run.quadrature)
    row = {
        "delta": delta, "epsilon": epsilon, "n": n,
        "i_p": _nats_to_units(i_p, run.units),
        "i_q": _nats_to_units(i_q, run.units),
        "degradation": _nats_to_units(i_q - i_p, run.units),
    }
    if run.verify:
        if n > 3:
            raise ValueError("exhaustive verification needs n <= 3")
        ref = oracles.exhaustive_jammed_mi(jamming.bsc_to_generic(spec))
        row["oracle"] = _nats_to_units(ref, run.units)
        row["verify_abs_diff"] = abs(row["i_p"] - row["oracle"])
    return row


def _cmd_jamming(args, run):
    if args.sweep is None:
        _emit_record(_jamming_point(args.delta, args.epsilon, args.n, run), run)
        return 0
    if args.sweep == "epsilon":
        grid = (
            _parse_grid(args.grid, float)
            if args.grid
            else [round(e, 4) for e in np.linspace(args.delta * 2, 0.5, 15)]
        )
        rows = [_jamming_point(args.delta, e, args.n, run) for e in grid]
        x_col = "epsilon"
        logx = False
    else:
        grid = (
            _parse_grid(args.grid, int)
            if args.grid
            else [2, 4, 8, 16, 32, 64, 128, 256]
        )
        rows = [_jamming_point(args.delta, args.epsilon, n, run) for n in grid]
        x_col = "n"
        logx = True
    _emit_rows(rows, run)
    if args.plot:
        from .plots import render_sweep

        render_sweep(rows, x_col, args.plot,
                     ylabel=f"mutual information ({run.units})",
                     title="degradation of mutual information",
                     logx=logx)
    return 0


_COMMANDS = {
    "moment": _cmd_moment,
    "guesswork": _cmd_guesswork,
    "estimation": _cmd_estimation,
    "cauchy": _cmd_cauchy,
    "jamming": _cmd_jamming,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    config_file = _load_config_file()
    if args.units is None:
        args.units = config_file.get("units", "nats")
    if args.format is None:
        # leave None so each mode keeps its default (JSON point, CSV sweep)
        args.format = config_file.get("format")
    try:
        run = RunConfig(
            quadrature=_quad_config(args, config_file),
            output_format=args.format,
            output_path=args.out,
            verify=args.verify,
            units=args.units,
        )
        return _COMMANDS[args.command](args, run)
    except QuadratureNonConvergence as exc:
        print(f"fracmoment: non-convergence: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"fracmoment: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
