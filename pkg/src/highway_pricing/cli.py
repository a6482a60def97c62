"""Command-line entry point: ``highway-pricing <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 an enumeration cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds
from .bench import (
    ALGOS, GeneratorSpec, default_threads, generate, run_algorithm, run_suite, to_csv, to_report,
)
from .core import GuardError, PriceConstraintError, ValidationError, instance_to_dict, profit
from .oracle import exact_opt_coupon
from .serialization import prices_to_json, rational_to_json, read_instance, read_prices, write_instance

EXIT_INVALID = 2
EXIT_GUARD = 3


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args):
    inst = generate(GeneratorSpec(args.topology, args.n, args.m, args.s_gen, args.l_gen, args.seed))
    if args.out:
        write_instance(inst, args.out)
    else:
        _emit(instance_to_dict(inst))


def cmd_eval(args):
    inst = read_instance(args.instance)
    prices = read_prices(args.prices)
    value = profit(inst, prices, args.model, args.bound)
    _emit({"model": args.model, "profit": rational_to_json(value)})


def _report_json(report) -> dict:
    out = {}
    for key, value in vars(report).items():
        if key in ("prices", "marking", "cut", "kept", "classes"):
            continue
        if isinstance(value, Fraction):
            out[key] = rational_to_json(value)
        elif isinstance(value, bounds.Bound):
            out[key] = {"ratio": str(value.ratio), "regime": value.regime}
        elif value is None or isinstance(value, (int, str, float)):
            out[key] = value
    marking = getattr(report, "marking", None)
    if marking is not None:
        out["marking_left"] = sorted(marking.left_set)
    classes = getattr(report, "classes", None)
    if classes is not None:
        out["in_classes"] = {
            "M_h": classes.m_h,
            "M_L": {str(k): v for k, v in classes.m_l.items()},
            "M_R": {str(k): v for k, v in classes.m_r.items()},
            "M_LR": {f"{b},{g}": v for (b, g), v in classes.m_lr.items()},
        }
    return out


def cmd_solve(args):
    inst = read_instance(args.instance)
    report = run_algorithm(inst, args.algo, args.strategy, args.seed, args.pivot)
    value = profit(inst, report.prices)
    result = {"algo": args.algo, "prices": prices_to_json(report.prices)["prices"],
              "profit": rational_to_json(value), "report": _report_json(report)}
    if args.out:
        _emit(prices_to_json(report.prices), args.out)
    _emit(result)


def cmd_oracle(args):
    inst = read_instance(args.instance)
    res = exact_opt_coupon(inst)
    _emit({"opt": rational_to_json(res.opt),
           "prices": [rational_to_json(p) for p in res.prices],
           "shares": {str(x): rational_to_json(v) for x, v in res.shares.items()},
           "search_space_size": res.search_space_size})


def cmd_bench(args):
    config_path = Path(args.config)
    config = json.loads(config_path.read_text())
    records = run_suite(config, config_path.parent, args.threads)
    csv_text = to_csv(records)
    report = to_report(records)
    if args.csv:
        Path(args.csv).write_text(csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.report:
        _emit(report, args.report)
    summary = report["summary"]
    print(f"{summary['records']} records, {summary['bound_checked']} bound checks, "
          f"{summary['bound_violations']} violations", file=sys.stderr)


def cmd_bounds(args):
    r = Fraction(args.r)
    alpha = bounds.alpha_root()
    b = bounds.theorem3_bound(r)
    rows = {
        "r": str(r),
        "alpha": str(alpha),
        "combined": {"ratio": str(b.ratio), "regime": b.regime},
        "line_random": {"ratio": str(bounds.line_random_bound(r).ratio),
                        "regime": bounds.line_random_bound(r).regime},
        "cut": {"ratio": str(bounds.cut_bound(r).ratio), "regime": "4(1-ln r)"},
        "tree_random": {"ratio": str(bounds.tree_bound(r).ratio), "regime": "16/(3r)"},
    }
    _emit(rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="highway-pricing",
                                     description="Coupon-model highway pricing algorithms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--topology", choices=("line", "cycle", "tree"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--s-gen", type=int, default=1)
    p.add_argument("--l-gen", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("eval", help="profit of a price file")
    p.add_argument("instance")
    p.add_argument("prices")
    p.add_argument("--model", choices=("positive", "discount", "bounded", "coupon"), default="coupon")
    p.add_argument("--bound", type=int, help="loss cap B for the bounded model")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("solve", help="run a pricing algorithm")
    p.add_argument("instance")
    p.add_argument("--algo", choices=ALGOS, required=True)
    p.add_argument("--strategy", choices=("random", "derandomized", "exact", "local"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pivot", type=int)
    p.add_argument("--out", help="write the price file here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact optimum of a small instance")
    p.add_argument("instance")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run an experiment suite")
    p.add_argument("--config", required=True)
    p.add_argument("--csv")
    p.add_argument("--report")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: $HIGHWAY_PRICING_THREADS or 1)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("bounds", help="approximation ratios for r = s/ell")
    p.add_argument("--r", required=True, help="ratio as p/q")
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", None) is None and args.command == "bench":
        args.threads = default_threads()
    try:
        args.func(args)
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValidationError, PriceConstraintError, ValueError, KeyError,
            json.JSONDecodeError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return 0


if __name__ == "__main__":
    sys.exit(main())
