"""Command-line surface: bound evaluation, subsequence optimization, empirical
estimation, and synthetic depth sweeps.

All commands print JSON to stdout except ``sweep``, which writes a CSV file.
Exit codes: 0 ok, 2 input error, 3 degenerate budget, 4 mode mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bounds import BoundReport, baseline_bound, composite_bound, main_bound, norm_profile
from .errors import ConvergenceError, DegenerateBudgetError
from .estimator import EXACT_MODE_MAX_N, EstimatorConfig, empirical_rademacher
from .families import FAMILIES, SweepFamily, make_network
from .network import RADIUS_RTOL, load_inputs, load_network, save_network
from .norms import NormBudget, budget_from_network, load_budget
from .subseq import dyadic_subsequence, optimal_subsequence, subsequence_cost

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_MODE = 4

CSV_COLUMNS = ("depth", "P_F_D", "P_op_D", "sum_R", "bound_main", "bound_baseline", "bound_optimal")


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _parse_depths(text: str) -> range:
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise ValueError(f"bad depth range {text!r}")
    return range(lo, hi + 1)


def cmd_bound(args) -> int:
    if (args.network is None) == (args.budget is None):
        return _fail("exactly one of --network / --budget is required", EXIT_INPUT)
    if (args.method == "composite") != (args.subseq is not None):
        return _fail("--subseq is required exactly when --method composite", EXIT_INPUT)

    if args.network is not None:
        net = load_network(args.network)
        budget = budget_from_network(net, slack=0.0, B=args.B if args.B is not None else 1.0)
    else:
        budget = load_budget(args.budget)
        if args.B is not None:
            budget = NormBudget(budget.M_F, budget.M_op, args.B)

    profile = norm_profile(budget)
    n, B = args.n, budget.B
    if args.method == "main":
        report = BoundReport("main", main_bound(profile, n, B), n, B)
    elif args.method == "baseline":
        report = BoundReport("baseline", baseline_bound(profile, n, B), n, B)
    elif args.method == "composite":
        seq = tuple(int(s) for s in args.subseq.split(","))
        report = BoundReport("composite", composite_bound(profile, seq, n, B), n, B, seq)
    else:
        seq = optimal_subsequence(profile)
        report = BoundReport("optimal", composite_bound(profile, seq, n, B), n, B, seq)
    print(json.dumps(report.as_dict(), indent=2))
    return EXIT_OK


def cmd_optimize(args) -> int:
    profile = norm_profile(load_budget(args.budget))
    dyadic = dyadic_subsequence(profile)
    optimal = optimal_subsequence(profile)
    dyadic_cost = subsequence_cost(profile, dyadic)
    optimal_cost = subsequence_cost(profile, optimal)
    print(
        json.dumps(
            {
                "dyadic": list(dyadic),
                "dyadic_cost": dyadic_cost,
                "optimal": list(optimal),
                "optimal_cost": optimal_cost,
                "cost_ratio": optimal_cost / dyadic_cost,
            },
            indent=2,
        )
    )
    return EXIT_OK


def cmd_estimate(args) -> int:
    budget = load_budget(args.budget)
    inputs = load_inputs(args.inputs)
    worst = float(np.linalg.norm(inputs.points, axis=1).max())
    if worst > budget.B * (1.0 + RADIUS_RTOL):
        return _fail(
            f"input point of norm {worst:.6g} lies outside the budget's radius-{budget.B:.6g} ball",
            EXIT_INPUT,
        )
    mode = "monte_carlo" if args.mode == "mc" else "exact"
    if mode == "exact" and inputs.n > EXACT_MODE_MAX_N:
        return _fail(
            f"exact mode enumerates 2^n sign vectors and needs n <= {EXACT_MODE_MAX_N}, "
            f"got n={inputs.n}; rerun with --mode mc",
            EXIT_MODE,
        )
    cfg = EstimatorConfig(
        restarts=args.restarts,
        steps=args.steps,
        seed=args.seed,
        mode=mode,
        mc_samples=args.mc_samples,
    )
    est = empirical_rademacher(inputs, budget, cfg)

    profile = norm_profile(budget)
    seq = optimal_subsequence(profile)
    bound = composite_bound(profile, seq, inputs.n, budget.B)

    out = est.as_dict()
    if args.out is not None:
        save_network(est.witness, args.out)
        out["witness_file"] = str(args.out)
    out["bound"] = bound
    out["bound_subsequence"] = list(seq)
    out["ratio"] = est.value / bound
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_sweep(args) -> int:
    depths = _parse_depths(args.depths)
    lines = [",".join(CSV_COLUMNS)]
    for depth in depths:
        family = SweepFamily(args.family, depth, args.width, args.per_layer_frobenius, args.seed)
        budget = budget_from_network(make_network(family), slack=0.0, B=args.B)
        profile = norm_profile(budget)
        sum_r = float(np.sum(profile.R[:-1]))
        seq = optimal_subsequence(profile)
        row = (
            float(np.exp(profile.log_P_F[-1])),
            float(np.exp(profile.log_P_op[-1])),
            sum_r,
            main_bound(profile, args.n, args.B),
            baseline_bound(profile, args.n, args.B),
            composite_bound(profile, seq, args.n, args.B),
        )
        lines.append(",".join([str(depth)] + [format(v, ".17g") for v in row]))
    with open(args.out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="radbound",
        description="Norm-based Rademacher complexity bounds for ReLU networks.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="evaluate one bound from a network or budget file")
    b.add_argument("--network", help="network JSON file (tight budget derived, slack 0)")
    b.add_argument("--budget", help="budget JSON file")
    b.add_argument("--n", type=int, required=True, help="sample count")
    b.add_argument("--B", type=float, default=None, help="input radius override (default: budget's B, or 1.0 for networks)")
    b.add_argument("--method", choices=("main", "composite", "baseline", "optimal"), default="main")
    b.add_argument("--subseq", default=None, help='breakpoints for --method composite, e.g. "0,3,7"')
    b.set_defaults(func=cmd_bound)

    o = sub.add_parser("optimize", help="dyadic and optimal subsequences with their costs")
    o.add_argument("--budget", required=True)
    o.set_defaults(func=cmd_optimize)

    e = sub.add_parser("estimate", help="empirical Rademacher estimate vs the optimal bound")
    e.add_argument("--budget", required=True)
    e.add_argument("--inputs", required=True)
    e.add_argument("--mode", choices=("exact", "mc"), default="exact")
    e.add_argument("--mc-samples", type=int, default=100, dest="mc_samples")
    e.add_argument("--restarts", type=int, default=20)
    e.add_argument("--steps", type=int, default=500)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out", default=None, help="write the best witness network JSON here")
    e.set_defaults(func=cmd_estimate)

    s = sub.add_parser("sweep", help="depth sweep over a synthetic family, CSV output")
    s.add_argument("--family", choices=FAMILIES, required=True)
    s.add_argument("--depths", required=True, help='depth range like "1..64", or a single depth')
    s.add_argument("--width", type=int, required=True)
    s.add_argument("--per-layer-frobenius", type=float, default=1.0, dest="per_layer_frobenius")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--B", type=float, default=1.0)
    s.add_argument("--out", required=True, help="CSV output path")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    try:
        return args.func(args)
    except DegenerateBudgetError as e:
        return _fail(str(e), EXIT_DEGENERATE)
    except ConvergenceError as e:
        return _fail(str(e), EXIT_INPUT)
    except (OSError, ValueError) as e:
        return _fail(str(e), EXIT_INPUT)


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
