"""Command-line front end: `spectra ...` and `prooflab ...`.

Exit codes: 0 success, 2 bad input or unmet precondition, 3 an interval
comparison could not be decided, 4 a search budget was exceeded. Errors
are also written to stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import classical, engine, prooflab
from .errors import Ambiguous, BudgetExceeded, EmptySubshift, SpectraError
from .io import (ConfigError, dumps, load_params, load_perturbation, load_potential, load_sequence,
                 load_sft, plot_entropy_csv, plot_sample, write_entropy_csv)
from .potentials import AffineModelPotential, cylinder_perturbation, json_number, perturb, random_perturbation


def _number(text: str) -> Fraction:
    try:
        return json_number(json.loads(text))
    except (json.JSONDecodeError, TypeError, ValueError):
        try:
            return Fraction(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in re.split(r"[,\s]+", text.strip().strip("()[]")) if s]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from None


# ---------------------------------------------------------------------------
# spectra subcommands
# ---------------------------------------------------------------------------

def cmd_cf(args):
    cf = classical.ContinuedFraction(tuple(args.preperiod or ()), tuple(args.period))
    value = classical.cf_eval(cf)
    return {"cf": {"preperiod": list(cf.preperiod), "period": list(cf.period),
                   "value": value.to_json(), "decimal": value.decimal(args.digits)}}


def cmd_triples(args):
    return {"triples": [list(t.as_tuple()) for t in classical.markov_triples(args.zmax)]}


def cmd_lagrange(args):
    if args.period is not None:
        value = classical.lagrange_number(args.period)
        return {"lagrange": {"period": list(args.period), "value": value.to_json(),
                             "decimal": value.decimal(args.digits)}}
    rows = []
    for row in classical.lagrange_routes(args.zmax):
        v = row["cf_value"]
        rows.append({"z": row["z"], "period": list(row["period"]), "value": v.to_json(),
                     "decimal": v.decimal(args.digits), "agree": row["agree"]})
    return {"lagrange": rows}


def _potential(args, S):
    f = load_potential(args.potential)
    if getattr(args, "perturbation", None):
        f = perturb(f, load_perturbation(args.perturbation))
    if getattr(args, "random_perturbation", None) is not None:
        rng = np.random.default_rng(args.seed)
        eps = args.random_perturbation
        n = args.perturbation_depth
        spec = random_perturbation(S, eps, rng) if n == 1 else cylinder_perturbation(S, n, eps, rng)
        f = perturb(f, spec)
    return f


def cmd_min(args):
    S = load_sft(args.sft)
    f = _potential(args, S)
    report = engine.min_markov(S, f, depth_cap=args.depth_cap, budget=args.budget)
    out = {
        "min": report.min_value,
        "cycle": str(report.minimizing_cycle.cycle),
        "certificate": report.minimizing_cycle,
        "second": report.second_value,
        "second_cycle": None if report.second_cycle is None else str(report.second_cycle.cycle),
        "gap": report.gap,
        "isolated": report.isolated,
        "ambiguous": report.ambiguous,
        "radius": report.radius,
        "node_count": report.node_count,
        "edge_count": report.edge_count,
    }
    exact = report.minimizing_cycle.exact_value()
    if exact is not None:
        out["min_exact"] = exact
    if report.ambiguous:
        return out, 3
    return out


def _grid(start: Fraction, stop: Fraction, steps: int) -> list[Fraction]:
    if steps < 1 or stop < start:
        raise ConfigError("need --steps >= 1 and --from <= --to")
    return [start + (stop - start) * i / steps for i in range(steps + 1)]


def cmd_sublevel_scan(args):
    S = load_sft(args.sft)
    f = _potential(args, S)
    ts = _grid(args.t_from, args.t_to, args.steps)
    points = engine.entropy_curve(S, f, ts, radius=args.radius, tol=args.tol, budget=args.budget)
    write_entropy_csv(points, args.csv, args.digits)
    if args.png:
        plot_entropy_csv(args.csv, args.png)
    empty = [p.t for p in points if p.empty]
    return {"csv": str(args.csv), "points": len(points), "empty_below": max(empty) if empty else None}


def cmd_sample(args):
    S = load_sft(args.sft)
    f = _potential(args, S)
    values = engine.periodic_spectrum_sample(S, f, args.max_period, budget=args.budget)
    out = {"max_period": args.max_period,
           "values": [{"value": v.value, "exact": v.exact, "cycles": [str(c) for c in v.cycles]}
                      for v in values]}
    if args.png:
        plot_sample([float(v.value) for v in values], args.png)
    return out


# ---------------------------------------------------------------------------
# prooflab subcommands
# ---------------------------------------------------------------------------

def _lab_potential(args):
    return load_potential(args.potential) if args.potential else None


def cmd_records(args):
    theta = load_sequence(args.theta)
    params = load_params(args.params)
    return prooflab.records(theta, params, args.horizon, f=_lab_potential(args), depth=args.depth)


def cmd_cells(args):
    theta = load_sequence(args.theta)
    params = load_params(args.params)
    f = load_potential(args.potential)
    spec = prooflab.cells(theta, args.k, f, params)
    return {"cell": spec, "basic": list(spec.basic(theta)), "extended": list(spec.extended(theta))}


def cmd_claim(args):
    theta = load_sequence(args.theta)
    m = args.m if args.m is not None else load_params(args.params).m if args.params else None
    if m is None:
        raise ConfigError("claim needs --m or --params")
    hit = prooflab.power_factor_check(theta, m, args.center_window)
    return {"m": m, "clean": hit is None, "violation": hit}


def cmd_strange(args):
    theta = load_sequence(args.theta)
    return {"alpha": list(args.alpha),
            "strange": prooflab.strange_positions(theta, args.alpha, args.lo, args.hi)}


def cmd_compete(args):
    theta = load_sequence(args.theta)
    params = load_params(args.params)
    f = load_potential(args.potential)
    S = load_sft(args.sft) if args.sft else None
    modes = ("i", "ii") if args.mode == "both" else (args.mode,)
    reports = [prooflab.periodic_competitor(theta, m, args.n, f, params, args.horizon, S) for m in modes]
    return {"reports": reports}


def cmd_lambda_scan(args):
    params = load_params(args.params)
    S = load_sft(args.sft)
    alphabet = S.pruned().alphabet
    ratios = {a: args.ratio for a in alphabet} if args.ratio is not None else None
    model = AffineModelPotential(params.a, params.b, 0, alphabet, ratios, ratios, params.lam1, params.lam2)
    grid = prooflab.lambda_grid(float(args.delta), args.points)
    report = prooflab.lambda_scan(model, S, range(args.r_from, args.r_to + 1), args.k, grid)
    return {"k": report.k, "dimension": report.dimension, "r_values": list(report.r_values),
            "bad_fraction": list(report.bad_fraction), "tail_bad_fraction": list(report.tail_bad_fraction),
            "fitted_rate": report.fitted_rate, "predicted_rate": report.predicted_rate,
            "rate_ratio": report.rate_ratio()}


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="seed for randomized experiments")
    parser.add_argument("--tol", type=float, default=d(1e-9), help="interval width tolerance")
    parser.add_argument("--digits", type=int, default=d(12), help="digits in decimal strings")
    parser.add_argument("--out", type=Path, default=d(None), help="write JSON here instead of stdout")
    parser.add_argument("--budget", type=int, default=d(engine.DEFAULT_BUDGET), help="search budget")


def _model_options(p: argparse.ArgumentParser, perturbations: bool = True) -> None:
    p.add_argument("--sft", default="full2", help="preset name or JSON file")
    p.add_argument("--potential", default="gauss:20", help="gauss:k or JSON file")
    if perturbations:
        p.add_argument("--perturbation", help="perturbation JSON file")
        p.add_argument("--random-perturbation", type=_number, metavar="EPS",
                       help="add a seeded random perturbation with |t| <= EPS")
        p.add_argument("--perturbation-depth", type=int, default=1,
                       help="cylinder length the random perturbation keys on")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectra", description=__doc__.splitlines()[0])
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        p.set_defaults(func=fn)
        return p

    p = add("cf", cmd_cf, help="value of a periodic continued fraction")
    p.add_argument("--period", type=_int_list, required=True)
    p.add_argument("--preperiod", type=_int_list)

    p = add("triples", cmd_triples, help="Markov triples up to zmax")
    p.add_argument("--zmax", type=int, required=True)

    p = add("lagrange", cmd_lagrange, help="Lagrange numbers of periods or the spectrum below 3")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--period", type=_int_list)
    g.add_argument("--zmax", type=int)

    p = add("min", cmd_min, help="minimum of the dynamical Markov spectrum")
    _model_options(p)
    p.add_argument("--depth-cap", type=int)
    p.add_argument("--report", choices=["json"], default="json")

    p = add("sublevel-scan", cmd_sublevel_scan, help="entropy of sublevel sets over a t grid")
    _model_options(p)
    p.add_argument("--from", dest="t_from", type=_number, required=True)
    p.add_argument("--to", dest="t_to", type=_number, required=True)
    p.add_argument("--steps", type=int, required=True, help="number of grid intervals")
    p.add_argument("--csv", type=Path, required=True)
    p.add_argument("--png", type=Path)
    p.add_argument("--radius", type=int)

    p = add("sample", cmd_sample, help="Markov values of periodic orbits")
    _model_options(p)
    p.add_argument("--max-period", type=int, required=True)
    p.add_argument("--png", type=Path)

    lab = sub.add_parser("prooflab", parents=[common], help="proof combinatorics")
    _prooflab_commands(lab.add_subparsers(dest="lab_command", required=True), common)
    return parser


def _prooflab_commands(sub, common) -> None:
    def add(name, fn, theta=True, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        p.set_defaults(func=fn)
        if theta:
            p.add_argument("--theta", required=True, help="sequence JSON file")
        return p

    p = add("records", cmd_records, help="returns, records and their flags")
    p.add_argument("--params", required=True)
    p.add_argument("--horizon", type=int, default=200)
    p.add_argument("--potential", help="adds goodness/happiness flags")
    p.add_argument("--depth", type=int)

    p = add("cells", cmd_cells, help="basic and extended cell of a happy return")
    p.add_argument("--params", required=True)
    p.add_argument("--potential", default="gauss:20")
    p.add_argument("--k", type=int, required=True)

    p = add("claim", cmd_claim, help="search for a centered gamma^(2m) factor")
    p.add_argument("--m", type=int)
    p.add_argument("--params")
    p.add_argument("--center-window", type=int, default=50)

    p = add("strange", cmd_strange, help="strange positions relative to a period")
    p.add_argument("--alpha", type=_int_list, required=True)
    p.add_argument("--lo", type=int)
    p.add_argument("--hi", type=int)

    p = add("compete", cmd_compete, help="periodic competitor built from the records")
    p.add_argument("--params", required=True)
    p.add_argument("--potential", default="gauss:20")
    p.add_argument("--sft")
    p.add_argument("--mode", choices=["i", "ii", "case-i", "case-ii", "both"], default="both")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--horizon", type=int, default=200)

    p = add("lambda-scan", cmd_lambda_scan, theta=False, help="bad-lambda fraction versus resolution")
    p.add_argument("--params", required=True)
    p.add_argument("--sft", default="full2")
    p.add_argument("--ratio", type=_number, help="common contraction ratio per symbol")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--r-from", type=int, default=2)
    p.add_argument("--r-to", type=int, default=20)
    p.add_argument("--delta", type=_number, default=Fraction(1, 10))
    p.add_argument("--points", type=int, default=10_000)


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def _kebab(name: str) -> str:
    return re.sub(r"(?<!^)(?=[A-Z])", "-", name).lower()


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}, sort_keys=True) + "\n")
    return code


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else _fail("usage", "invalid command line", 2)
    try:
        result = args.func(args)
    except EmptySubshift as exc:
        return _fail("empty-subshift", str(exc), 2)
    except Ambiguous as exc:
        return _fail("ambiguous", str(exc), 3)
    except BudgetExceeded as exc:
        return _fail("budget-exceeded", str(exc), 4)
    except ConfigError as exc:
        return _fail("config", str(exc), 2)
    except SpectraError as exc:
        return _fail(_kebab(type(exc).__name__), str(exc), 2)
    except (ValueError, KeyError, IndexError) as exc:
        return _fail("config", str(exc), 2)
    code = 0
    if isinstance(result, tuple):
        result, code = result
    text = dumps(result, args.digits) + "\n"
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    if code == 3:
        return _fail("ambiguous", "certificates from lower and upper weights disagree", 3)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    sys.exit(run(argv))


def prooflab_main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    sys.exit(run(["prooflab", *argv]))


if __name__ == "__main__":
    main()
