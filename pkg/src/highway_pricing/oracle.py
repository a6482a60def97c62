"""Ground truth for small instances.

``exact_opt_coupon`` relies on the following fact. Fix the set ``S`` of
customers that pay under an optimal price vector. Maximising
``sum_{j in S} p(e_j)`` subject to ``p(e_j) <= w_j`` for ``j in S`` is a
bounded LP whose optimum is at least the true optimum, and any feasible
point earns at least its LP value in the coupon model. The LP optimum is
attained on a minimal face, which is cut out by a linearly independent set
``T`` of tight constraints ``p(e_j) = w_j``. So solving every independent
tight system and keeping the best coupon profit is exact. This works for
cycles too, where optima can need fractional prices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .bounds import alpha_root  # noqa: F401  (part of the oracle surface)
from .core import GuardError, Instance, boundary_graph, payments, profit, valuation_profile
from .cuts import Marking, pairwise_space
from .cycle import cycle_sl_from_marking
from .line import line_cut, line_cut_from_marking
from .tree import rooted_view

ORACLE_MAX_CUSTOMERS = 14
ENUMERATION_CAP = 10 ** 6
LATTICE_CHUNK = 1 << 16
ALGORITHMS = ("line_random", "line_cut", "line_sl", "cycle_sl", "tree_random")


@dataclass(frozen=True)
class OracleResult:
    opt: Fraction
    prices: tuple[Fraction, ...]
    shares: dict
    search_space_size: int


def _solve_tight(rows: Sequence[Sequence[int]], rhs: Sequence[int], n: int):
    """Particular solution of ``rows @ p = rhs`` with free variables at 0.

    Returns None when the rows are dependent or the system is inconsistent.
    """
    mat = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        lead = mat[r][col]
        mat[r] = [v / lead for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    if r < len(mat):
        return None
    p = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        p[col] = mat[i][n]
    return p


def exact_opt_coupon(inst: Instance, max_customers: int = ORACLE_MAX_CUSTOMERS) -> OracleResult:
    """Maximum coupon profit, by solving every independent tight system.

    Ties keep the first system in (size, lexicographic) order.
    """
    if inst.m > max_customers:
        raise GuardError(
            f"oracle enumerates 2^{inst.m} tight sets (cap 2^{max_customers} customers)")
    n = inst.n
    rows = []
    for bundle in inst.bundles:
        row = [0] * n
        for i in bundle:
            row[i - 1] = 1
        rows.append(row)
    best_prices = (Fraction(0),) * n
    best = Fraction(0)
    examined = 0
    for size in range(0, min(inst.m, n) + 1):
        for subset in itertools.combinations(range(inst.m), size):
            examined += 1
            if not subset:
                continue
            p = _solve_tight([rows[j] for j in subset],
                             [inst.customers[j].valuation for j in subset], n)
            if p is None:
                continue
            value = profit(inst, p)
            if value > best:
                best, best_prices = value, tuple(p)
    shares = {}
    if inst.m:
        shares = {x: Fraction(0) for x in valuation_profile(inst).counts}
        for c, paid in zip(inst.customers, payments(inst, best_prices)):
            shares[c.valuation] += paid
    return OracleResult(best, best_prices, shares, examined)


# -- expectations -------------------------------------------------------------

def _check_cap(size: int, cap: int = ENUMERATION_CAP) -> None:
    if size > cap:
        raise GuardError(f"enumeration of {size} outcomes exceeds cap {cap}")


def exact_expectation(algorithm: str, inst: Instance) -> Fraction:
    """Average coupon profit over the algorithm's whole randomness space.

    Partial-sum algorithms enumerate every draw; cut algorithms average over
    the pairwise-independent sample space.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if not inst.m:
        return Fraction(0)
    ell = valuation_profile(inst).ell
    if algorithm in ("line_random", "line_sl"):
        size = (ell + 1) ** (inst.n + 1)
        _check_cap(size)
        values = _coupon_profits(inst, np.diff(_all_draws(ell + 1, inst.n + 1), axis=1))
        if algorithm == "line_sl":
            values = np.maximum(values, int(line_cut(inst, "derandomized").profit))
        return Fraction(int(values.sum()), size)
    if algorithm == "tree_random":
        size = (ell + 1) ** inst.n
        _check_cap(size)
        values = _coupon_profits(inst, _tree_price_rows(inst, _all_draws(ell + 1, inst.n)))
        return Fraction(int(values.sum()), size)
    space = pairwise_space(boundary_graph(inst).vertex_count)
    run = line_cut_from_marking if algorithm == "line_cut" else cycle_sl_from_marking
    return sum((run(inst, mk).profit for mk in space), Fraction(0)) / len(space)


class MonteCarloResult(NamedTuple):
    mean: Fraction
    stddev: float
    half_width: float
    trials: int


Z99 = NormalDist().inv_cdf(0.995)


def _incidence(inst: Instance) -> np.ndarray:
    a = np.zeros((inst.n, inst.m), dtype=np.int64)
    for j, bundle in enumerate(inst.bundles):
        for i in bundle:
            a[i - 1, j] = 1
    return a


def _coupon_profits(inst: Instance, prices: np.ndarray) -> np.ndarray:
    """Coupon profit of each integer price row, vectorised."""
    sums = prices @ _incidence(inst)
    w = np.array(inst.valuations, dtype=np.int64)
    return np.where((sums > 0) & (sums <= w), sums, 0).sum(axis=1)


def _all_draws(high: int, width: int) -> np.ndarray:
    """Every vector in ``{0..high-1}^width``, one per row."""
    grids = np.indices((high,) * width).reshape(width, -1)
    return grids.T.astype(np.int64)


def _tree_price_rows(inst: Instance, sums: np.ndarray) -> np.ndarray:
    """Row-wise ``p_i = s_i - s_parent(i)`` with the root's reference sum 0."""
    view = rooted_view(inst)
    parent_cols = [view.parent[i] - 1 for i in range(1, inst.n + 1)]
    # the root's parent column -1 picks the appended zero column
    padded = np.concatenate([sums, np.zeros((len(sums), 1), dtype=sums.dtype)], axis=1)
    return sums - padded[:, parent_cols]


def lattice_opt_coupon(inst: Instance, step=Fraction(1), radius: Optional[int] = None,
                       cap: int = 3 * 10 ** 6) -> Fraction:
    """Brute force over price vectors on a lattice, for cross-checking.

    Lines search partial sums ``s_1..s_n`` (``s_0 = 0``); cycles and trees
    search per-item prices. Every coordinate ranges over multiples of
    ``step`` in ``[-radius, radius]`` (default radius: total valuation).
    Arithmetic is in integers scaled by the denominator of ``step``.
    """
    step = Fraction(step)
    radius = inst.total_valuation if radius is None else radius
    k = int(radius / step)
    base = 2 * k + 1
    size = base ** inst.n
    if size > cap:
        raise GuardError(f"lattice has {base}^{inst.n} points (cap {cap})")
    if not inst.m:
        return Fraction(0)
    incidence = _incidence(inst)
    w = np.array(inst.valuations, dtype=np.int64) * step.denominator
    powers = base ** np.arange(inst.n - 1, -1, -1, dtype=np.int64)
    best = 0
    for start in range(0, size, LATTICE_CHUNK):
        idx = np.arange(start, min(start + LATTICE_CHUNK, size), dtype=np.int64)
        point = ((idx[:, None] // powers) % base - k) * step.numerator
        if inst.topology == "line":
            point = np.diff(point, axis=1, prepend=0)
        sums = point @ incidence
        best = max(best, int(np.where((sums > 0) & (sums <= w), sums, 0).sum(axis=1).max()))
    return Fraction(best, step.denominator)


def trial_draws(seed, trials: int, width: int, high: int) -> np.ndarray:
    """Row ``t`` holds the draws of trial ``t``.

    Rows are consecutive slices of the single stream seeded by ``seed``, so
    row ``t`` depends only on ``(seed, t)`` and row 0 matches a single run
    of the algorithm with the same seed.
    """
    return np.random.default_rng(seed).integers(0, high, size=(trials, width))


def monte_carlo(algorithm: str, inst: Instance, trials: int, seed=0) -> MonteCarloResult:
    """Sample mean, sample standard deviation and 99% normal half-width."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if trials < 100:
        raise ValueError("monte_carlo needs at least 100 trials")
    if not inst.m:
        return MonteCarloResult(Fraction(0), 0.0, 0.0, trials)
    ell = valuation_profile(inst).ell
    if algorithm in ("line_random", "line_sl"):
        sums = trial_draws(seed, trials, inst.n + 1, ell + 1)
        values = [Fraction(int(v)) for v in _coupon_profits(inst, np.diff(sums, axis=1))]
        if algorithm == "line_sl":
            floor = line_cut(inst, "derandomized").profit
            values = [max(v, floor) for v in values]
    elif algorithm == "tree_random":
        sums = trial_draws(seed, trials, inst.n, ell + 1)
        values = [Fraction(int(v)) for v in _coupon_profits(inst, _tree_price_rows(inst, sums))]
    else:
        k = boundary_graph(inst).vertex_count
        bits = trial_draws(seed, trials, k, 2)
        run = line_cut_from_marking if algorithm == "line_cut" else cycle_sl_from_marking
        cache: dict = {}
        values = []
        for row in bits:
            key = tuple(row == 1)
            if key not in cache:
                cache[key] = run(inst, Marking(key)).profit
            values.append(cache[key])
    mean = sum(values, Fraction(0)) / trials
    m = float(mean)
    var = sum((float(v) - m) ** 2 for v in values) / (trials - 1)
    sd = math.sqrt(var)
    return MonteCarloResult(mean, sd, Z99 * sd / math.sqrt(trials), trials)
