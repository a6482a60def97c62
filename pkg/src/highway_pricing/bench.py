"""Instance generation and experiment suites."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Optional

import numpy as np

from . import bounds
from .core import (
    Customer, GuardError, Instance, ValidationError, boundary_graph, instance_to_dict, profit,
    validate_instance, valuation_profile,
)
from .cuts import Marking
from .cycle import cyc_single_val, cycle_sl, cycle_sl_from_marking
from .line import line_combined, line_cut, line_cut_from_marking, line_random, line_random_expected_profit
from .oracle import exact_expectation, exact_opt_coupon, monte_carlo
from .serialization import rational_to_json
from .tree import tree_random

THREADS_ENV = "HIGHWAY_PRICING_THREADS"
ALGOS = ("line-random", "line-cut", "line-sl", "cycle-sl", "cyc-single", "tree-random")
TOPOLOGY_OF = {"line-random": "line", "line-cut": "line", "line-sl": "line",
               "cycle-sl": "cycle", "cyc-single": "cycle", "tree-random": "tree"}
DEFAULT_STRATEGY = {"line-random": "random", "line-cut": "derandomized", "line-sl": "derandomized",
                    "cycle-sl": "derandomized", "cyc-single": "exact", "tree-random": "random"}
LEGAL_STRATEGIES = {"line-random": ("random",), "line-cut": ("random", "derandomized"),
                    "line-sl": ("random", "derandomized"), "cycle-sl": ("random", "derandomized"),
                    "cyc-single": ("exact", "local", "derandomized"), "tree-random": ("random",)}
FULL_SPACE_MAX_VERTICES = 16
ENUMERATE_MAX = 2 * 10 ** 5


@dataclass(frozen=True)
class GeneratorSpec:
    topology: str
    n: int
    m: int
    s_gen: int = 1
    l_gen: int = 1
    seed: int = 0


def generate(spec: GeneratorSpec) -> Instance:
    """Random instance; bundles are uniform over the legal intervals/paths."""
    if spec.m < 0 or spec.n < 1 and spec.m >= 1:
        raise ValidationError(f"infeasible generator spec: n={spec.n}, m={spec.m}")
    if not 1 <= spec.s_gen <= spec.l_gen:
        raise ValidationError(f"bad valuation range [{spec.s_gen}, {spec.l_gen}]")
    if spec.topology == "cycle" and spec.n < 2 and spec.m >= 1:
        raise ValidationError("a cycle needs n >= 2 to hold any legal customer")
    rng = np.random.default_rng(spec.seed)
    n = spec.n
    parents = None
    if spec.topology == "line":
        legal = [(a, b) for a in range(1, n + 1) for b in range(a, n + 1)]
    elif spec.topology == "cycle":
        legal = [(a, (a + size - 2) % n + 1) for a in range(1, n + 1) for size in range(1, n)]
    elif spec.topology == "tree":
        perm = rng.permutation(n) + 1
        parents = [0] * n
        for k in range(1, n):
            parents[perm[k] - 1] = int(perm[rng.integers(0, k)])
        legal = [(a, b) for a in range(1, n + 1) for b in range(a, n + 1)]
    else:
        raise ValidationError(f"unknown topology {spec.topology!r}")
    customers = []
    for _ in range(spec.m):
        a, b = legal[rng.integers(0, len(legal))]
        w = int(rng.integers(spec.s_gen, spec.l_gen + 1))
        customers.append(Customer(int(a), int(b), w))
    return Instance(spec.topology, n, tuple(customers), None if parents is None else tuple(parents))


def digest(inst: Instance) -> str:
    blob = json.dumps(instance_to_dict(inst), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


# -- running one algorithm ----------------------------------------------------

def run_algorithm(inst: Instance, algo: str, strategy: Optional[str] = None, seed=0,
                  pivot: Optional[int] = None):
    """Dispatch by CLI algorithm id; returns the algorithm's report."""
    if algo not in ALGOS:
        raise ValueError(f"unknown algorithm {algo!r}")
    strategy = strategy or DEFAULT_STRATEGY[algo]
    if strategy not in LEGAL_STRATEGIES[algo]:
        raise ValueError(f"strategy {strategy!r} not available for {algo}")
    if inst.topology != TOPOLOGY_OF[algo]:
        raise ValidationError(f"{algo} needs a {TOPOLOGY_OF[algo]} instance, got {inst.topology}")
    if algo == "line-random":
        return line_random(inst, seed)
    if algo == "line-cut":
        return line_cut(inst, strategy, seed)
    if algo == "line-sl":
        return line_combined(inst, seed, strategy)
    if algo == "cycle-sl":
        return cycle_sl(inst, strategy, seed)
    if algo == "cyc-single":
        return cyc_single_val(inst, pivot, strategy, seed)
    return tree_random(inst, seed)


def is_randomized(algo: str, strategy: str) -> bool:
    return strategy == "random" or algo in ("line-sl", "line-random", "tree-random")


def applicable_bound(inst: Instance, algo: str, strategy: str) -> Optional[bounds.Bound]:
    if not inst.m:
        return None
    r = valuation_profile(inst).r
    if algo == "line-random":
        return bounds.line_random_bound(r)
    if algo in ("line-cut", "cycle-sl"):
        return bounds.cut_bound(r)
    if algo == "line-sl":
        return bounds.theorem3_bound(r)
    if algo == "cyc-single":
        ratio = bounds.single_val_ratio({"exact": 2}.get(strategy, 4))
        return bounds.Bound(bounds.to_decimal(ratio), f"(3a+4)/4, a={2 if strategy == 'exact' else 4}")
    return bounds.tree_bound(r)


def expected_profit(inst: Instance, algo: str, strategy: str, trials: int, seed):
    """(value, method, half_width) for randomised runs."""
    if algo == "line-random":
        return line_random_expected_profit(inst), "exact", 0.0
    if algo in ("line-cut", "cycle-sl"):
        k = boundary_graph(inst).vertex_count
        if k <= FULL_SPACE_MAX_VERTICES:
            run = line_cut_from_marking if algo == "line-cut" else cycle_sl_from_marking
            total = sum((run(inst, Marking(bits)).profit for bits in product((True, False), repeat=k)),
                        Fraction(0))
            return total / 2 ** k, "exact", 0.0
        mc = monte_carlo(algo.replace("-", "_"), inst, trials, seed)
        return mc.mean, "monte-carlo", mc.half_width
    name = {"line-sl": "line_sl", "tree-random": "tree_random"}[algo]
    ell = valuation_profile(inst).ell
    size = (ell + 1) ** (inst.n + (1 if algo == "line-sl" else 0))
    if size <= ENUMERATE_MAX:
        return exact_expectation(name, inst), "exact", 0.0
    mc = monte_carlo(name, inst, trials, seed)
    return mc.mean, "monte-carlo", mc.half_width


@dataclass
class ExperimentRecord:
    instance: str
    topology: str
    n: int
    m: int
    algo: str
    strategy: str
    seed: int
    prices: tuple
    profit: Fraction
    expected: Optional[Fraction] = None
    expectation_method: str = "deterministic"
    half_width: float = 0.0
    opt: Optional[Fraction] = None
    ratio: Optional[Fraction] = None
    bound_regime: str = ""
    bound_ratio: Optional[object] = None
    bound_satisfied: Optional[bool] = None
    note: str = ""
    wall_time: float = field(default=0.0, compare=False)


def run_one(inst: Instance, algo: str, strategy: Optional[str], seed, oracle: bool,
            trials: int) -> ExperimentRecord:
    strategy = strategy or DEFAULT_STRATEGY[algo]
    t0 = time.perf_counter()
    report = run_algorithm(inst, algo, strategy, seed)
    value = profit(inst, report.prices)
    if value != report.profit:
        raise AssertionError(f"{algo} self-reported {report.profit}, evaluator gives {value}")
    rec = ExperimentRecord(digest(inst), inst.topology, inst.n, inst.m, algo, strategy, seed,
                           tuple(report.prices), value)
    bound = applicable_bound(inst, algo, strategy)
    if bound is not None:
        rec.bound_regime, rec.bound_ratio = bound.regime, bound.ratio
    compared = value
    if is_randomized(algo, strategy) and inst.m:
        rec.expected, rec.expectation_method, rec.half_width = expected_profit(
            inst, algo, strategy, trials, seed)
        compared = rec.expected
    if oracle:
        try:
            rec.opt = exact_opt_coupon(inst).opt
        except GuardError as exc:
            rec.note = f"oracle skipped: {exc}"
        else:
            if value:
                rec.ratio = rec.opt / value
            if bound is not None:
                rec.bound_satisfied = bounds.satisfies(rec.opt, compared, bound.ratio,
                                                       slack=Fraction(rec.half_width))
            else:
                rec.bound_satisfied = True
    rec.wall_time = time.perf_counter() - t0
    return rec


# -- suites -------------------------------------------------------------------

def load_instances(config: dict, base: Path = Path(".")) -> list[Instance]:
    out = []
    for source in config.get("instances", []):
        if "file" in source:
            path = Path(source["file"])
            if not path.is_absolute():
                path = base / path
            out.append(validate_instance(json.loads(path.read_text())))
        elif "generate" in source:
            g = dict(source["generate"])
            s_gen, l_gen = g.pop("valuations", (g.pop("s_gen", 1), g.pop("l_gen", 1)))
            seed = g.pop("seed", 0)
            for k in range(source.get("count", 1)):
                out.append(generate(GeneratorSpec(g["topology"], g["n"], g["m"], s_gen, l_gen,
                                                  seed + k)))
        else:
            raise ValidationError(f"instance source needs 'file' or 'generate': {source}")
    return out


def _task(args):
    return run_one(*args)


def default_threads() -> int:
    return int(os.environ.get(THREADS_ENV, "1"))


def run_suite(config: dict, base: Path = Path("."), threads: Optional[int] = None) -> list[ExperimentRecord]:
    """One record per (instance, algorithm) in config order.

    Algorithms whose topology does not match an instance are skipped.
    """
    instances = load_instances(config, base)
    algos = config.get("algorithms", [])
    for spec in algos:
        if spec.get("algo") not in ALGOS:
            raise ValueError(f"unknown algorithm id {spec.get('algo')!r}")
    oracle = bool(config.get("oracle", False))
    trials = int(config.get("mc_trials", 10 ** 5))
    tasks = [(inst, spec["algo"], spec.get("strategy"), spec.get("seed", 0), oracle, trials)
             for inst in instances for spec in algos
             if TOPOLOGY_OF[spec["algo"]] == inst.topology]
    threads = threads or config.get("threads") or default_threads()
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_task, tasks))
    return [run_one(*t) for t in tasks]


CSV_COLUMNS = ("instance", "topology", "n", "m", "algo", "strategy", "seed",
               "profit_num", "profit_den", "profit", "expected_num", "expected_den", "expected",
               "expectation_method", "half_width", "opt_num", "opt_den", "opt",
               "ratio_num", "ratio_den", "ratio", "bound_regime", "bound_ratio",
               "bound_satisfied", "note")


def _q(value: Optional[Fraction]):
    if value is None:
        return "", "", ""
    return value.numerator, value.denominator, f"{bounds.to_decimal(value):.6f}"


def to_csv(records: list[ExperimentRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([
            r.instance, r.topology, r.n, r.m, r.algo, r.strategy, r.seed,
            *_q(r.profit), *_q(r.expected), r.expectation_method, f"{r.half_width:.6g}",
            *_q(r.opt), *_q(r.ratio), r.bound_regime,
            "" if r.bound_ratio is None else f"{r.bound_ratio:.6f}",
            "" if r.bound_satisfied is None else str(r.bound_satisfied).lower(), r.note,
        ])
    return buf.getvalue()


def to_report(records: list[ExperimentRecord]) -> dict:
    def q(v):
        return None if v is None else rational_to_json(v)
    rows = []
    for r in records:
        rows.append({
            "instance": r.instance, "topology": r.topology, "n": r.n, "m": r.m,
            "algo": r.algo, "strategy": r.strategy, "seed": r.seed,
            "prices": [rational_to_json(p) for p in r.prices],
            "profit": q(r.profit), "expected": q(r.expected),
            "expectation_method": r.expectation_method, "half_width": r.half_width,
            "opt": q(r.opt), "ratio": q(r.ratio), "bound_regime": r.bound_regime,
            "bound_ratio": None if r.bound_ratio is None else str(r.bound_ratio),
            "bound_satisfied": r.bound_satisfied, "note": r.note,
            "wall_time": round(r.wall_time, 6),
        })
    satisfied = [r.bound_satisfied for r in records if r.bound_satisfied is not None]
    return {"records": rows, "summary": {"records": len(records),
                                         "bound_checked": len(satisfied),
                                         "bound_violations": satisfied.count(False)}}
