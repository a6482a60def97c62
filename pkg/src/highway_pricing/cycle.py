"""Cycle highway algorithms: the potential-based cut pricing for general
valuations and the pivot-split algorithm for a single valuation."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .bounds import Bound, cut_bound, single_val_ratio
from .core import (
    Arc, BoundaryGraph, Customer, Instance, ValidationError, boundary_graph, payments, profit,
    valuation_profile,
)
from .cuts import (
    CutResult, Marking, best_marking, crossing, exact_max_dicut, local_search_dicut,
    pairwise_space, random_marking,
)

DICUT_STRATEGIES = ("exact", "local", "derandomized")
# ratio of the line subroutine that each dicut strategy certifies
CERTIFIED_A = {"exact": 2, "local": 4, "derandomized": 4}
PIVOT_PRICES = (-1, 0, 1, 2)


def _require_cycle(inst: Instance) -> None:
    if inst.topology != "cycle":
        raise ValidationError(f"expected a cycle instance, got {inst.topology}")


# -- general valuations -------------------------------------------------------

@dataclass(frozen=True)
class CycleRunReport:
    prices: tuple[Fraction, ...]
    profit: Fraction
    chosen_x: Optional[int]
    marking: Marking
    kept: tuple[Arc, ...]
    bound: Optional[Bound] = None


def potential_prices(inst: Instance, graph: BoundaryGraph, marking: Marking,
                     x: int) -> tuple[Fraction, ...]:
    """Prices realising potential ``-x/2`` on ``L`` and ``+x/2`` on ``R``.

    Only arc endpoints carry a potential. Any other boundary inherits the
    potential of the closest endpoint counter-clockwise, so the item right
    after a potential change carries the whole difference.
    """
    n = inst.n
    anchors = graph.endpoints
    if not anchors:
        return (Fraction(0),) * n
    half = Fraction(x, 2)
    phi: list[Optional[Fraction]] = [None] * n
    for v in anchors:
        phi[v] = -half if marking.left[v] else half
    start = min(anchors)
    last = phi[start]
    for step in range(1, n + 1):
        v = (start + step) % n
        if phi[v] is None:
            phi[v] = last
        last = phi[v]
    # item i sits between boundaries b_{i-1} and b_i
    return tuple(phi[i % n] - phi[(i - 1) % n] for i in range(1, n + 1))


def cycle_sl_from_marking(inst: Instance, marking: Marking) -> CycleRunReport:
    _require_cycle(inst)
    graph = boundary_graph(inst)
    kept = crossing(graph, marking).kept
    if not inst.m:
        return CycleRunReport((Fraction(0),) * inst.n, Fraction(0), None, marking, kept)
    prof = valuation_profile(inst)
    best = None
    for x in range(prof.s, prof.ell + 1):
        prices = potential_prices(inst, graph, marking, x)
        value = profit(inst, prices)
        if best is None or value > best[1]:
            best = (prices, value, x)
    return CycleRunReport(best[0], best[1], best[2], marking, kept, cut_bound(prof.r))


def cycle_sl(inst: Instance, strategy: str = "derandomized", seed=None) -> CycleRunReport:
    _require_cycle(inst)
    if strategy == "random":
        marking = random_marking(inst.n, seed)
    elif strategy == "derandomized":
        marking = best_marking(boundary_graph(inst), pairwise_space(inst.n)).marking
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return cycle_sl_from_marking(inst, marking)


class CycleIdentityCheck(NamedTuple):
    value: Fraction
    reconstructed: Fraction
    difference: Fraction
    lower: dict
    realized: dict


def cycle_identity_check(inst: Instance, marking: Marking) -> CycleIdentityCheck:
    """Kept weight against the kept-customer profit of each ``p_x``.

    ``lower[x]`` counts only kept customers; ``realized[x]`` is the full
    coupon profit of ``p_x``.
    """
    _require_cycle(inst)
    graph = boundary_graph(inst)
    cut = crossing(graph, marking)
    value = Fraction(cut.value)
    if not inst.m:
        return CycleIdentityCheck(value, Fraction(0), value, {}, {})
    prof = valuation_profile(inst)
    kept_ids = [a.customer for a in cut.kept]
    lower, realized = {}, {}
    for x in range(prof.s, prof.ell + 1):
        paid = payments(inst, potential_prices(inst, graph, marking, x))
        lower[x] = sum((paid[j] for j in kept_ids), Fraction(0))
        realized[x] = sum(paid, Fraction(0))
    total = lower[prof.s] + sum((lower[x] / x for x in range(prof.s + 1, prof.ell + 1)), Fraction(0))
    return CycleIdentityCheck(value, total, value - total, lower, realized)


# -- single valuation ---------------------------------------------------------

@dataclass(frozen=True)
class PivotSplit:
    h: int
    e_in: tuple[int, ...]
    e_out: tuple[int, ...]
    v_in: frozenset[int]
    v_out: frozenset[int]
    line_instance: Optional[Instance]
    relabel: dict


def _single_valuation(inst: Instance) -> int:
    vals = set(inst.valuations)
    if len(vals) > 1:
        raise ValidationError(f"expected a single valuation, got {sorted(vals)}")
    return vals.pop() if vals else 1


def split_at_pivot(inst: Instance, h: int) -> PivotSplit:
    """Separate customers whose bundle contains ``h`` from the rest.

    The others are relabelled as a line instance over the items they cover,
    ordered ``h+1, ..., n, 1, ..., h-1``.
    """
    _require_cycle(inst)
    w = _single_valuation(inst)
    if not 1 <= h <= inst.n:
        raise ValueError(f"pivot {h} out of range [1, {inst.n}]")
    e_in = tuple(j for j, b in enumerate(inst.bundles) if h in b)
    e_out = tuple(j for j, b in enumerate(inst.bundles) if h not in b)
    v_in = frozenset(i for j in e_in for i in inst.bundles[j])
    v_out = frozenset(i for j in e_out for i in inst.bundles[j])
    order = [(h + k - 1) % inst.n + 1 for k in range(1, inst.n)]
    relabel = {}
    for item in order:
        if item in v_out:
            relabel[item] = len(relabel) + 1
    line_instance = None
    if e_out:
        customers = []
        for j in e_out:
            pos = [relabel[i] for i in inst.bundles[j]]
            customers.append(Customer(min(pos), max(pos), w))
        line_instance = Instance("line", len(relabel), tuple(customers))
    return PivotSplit(h, e_in, e_out, v_in, v_out, line_instance, relabel)


class SubroutineResult(NamedTuple):
    prices: tuple[Fraction, ...]
    partial_sums: tuple[int, ...]
    value: int
    a: int
    cut: CutResult


def line_single_val_subroutine(line_inst: Instance, strategy: str = "exact", seed=None,
                               restarts: int = 4) -> SubroutineResult:
    """0/1 partial sums from a directed cut of the line boundary DAG.

    ``u_0`` has no incoming arcs, so it is moved to ``L`` whenever the cut
    put it in ``R``; this never loses a kept arc and pins ``s_0 = 0``.
    Prices are returned for a unit valuation.
    """
    if line_inst.topology != "line":
        raise ValidationError("subroutine expects a line instance")
    _single_valuation(line_inst)
    graph = boundary_graph(line_inst)
    if strategy == "exact":
        cut = exact_max_dicut(graph)
    elif strategy == "local":
        cut = local_search_dicut(graph, seed=seed, restarts=restarts)
    elif strategy == "derandomized":
        cut = best_marking(graph, pairwise_space(graph.vertex_count))
    else:
        raise ValueError(f"unknown dicut strategy {strategy!r}")
    if not cut.marking.left[0]:
        cut = crossing(graph, cut.marking.flipped(0))
    sums = tuple(0 if left else 1 for left in cut.marking.left)
    prices = tuple(Fraction(sums[i] - sums[i - 1]) for i in range(1, len(sums)))
    return SubroutineResult(prices, sums, cut.value, CERTIFIED_A[strategy], cut)


@dataclass
class InClassCounts:
    """Customers through the pivot, grouped by the price sums left and right of it."""

    m_h: int = 0
    m_l: dict = field(default_factory=lambda: {-1: 0, 0: 0, 1: 0})
    m_r: dict = field(default_factory=lambda: {0: 0, 1: 0})
    m_lr: dict = field(default_factory=lambda: {(b, g): 0 for b in (-1, 0, 1) for g in (0, 1)})

    def total(self) -> int:
        return self.m_h + sum(self.m_l.values()) + sum(self.m_r.values()) + sum(self.m_lr.values())

    def profit_for(self, x: int) -> int:
        """Number of through-pivot customers paying 1 when the pivot costs ``x``."""
        if x == -1:
            return self.m_lr[1, 1]
        if x == 0:
            return self.m_l[1] + self.m_r[1] + self.m_lr[0, 1] + self.m_lr[1, 0]
        if x == 1:
            return self.m_h + self.m_l[0] + self.m_r[0] + self.m_lr[-1, 1] + self.m_lr[0, 0]
        if x == 2:
            return self.m_l[-1] + self.m_lr[-1, 0]
        raise ValueError(f"pivot price {x} not in {PIVOT_PRICES}")


@dataclass(frozen=True)
class SingleValReport:
    prices: tuple[Fraction, ...]
    profit: Fraction
    h: int
    sigma_profit: Fraction
    tau_profit: Fraction
    profit_in: Fraction
    pivot_price: int
    classes: InClassCounts
    a: int
    certified_ratio: Fraction
    source: str


def _classify(inst: Instance, split: PivotSplit, tau: list[Fraction]) -> InClassCounts:
    counts = InClassCounts()
    for j in split.e_in:
        bundle = inst.bundles[j]
        k = bundle.index(split.h)
        left, right = bundle[:k], bundle[k + 1:]
        beta = int(sum((tau[i - 1] for i in left), Fraction(0)))
        gamma = int(sum((tau[i - 1] for i in right), Fraction(0)))
        if not left and not right:
            counts.m_h += 1
        elif not right:
            counts.m_l[beta] += 1
        elif not left:
            counts.m_r[gamma] += 1
        else:
            counts.m_lr[beta, gamma] += 1
    return counts


def _single_pivot(inst: Instance, h: int, dicut: str, seed, restarts: int) -> SingleValReport:
    # unit-valuation copy; prices and profits are scaled back by w at the end
    w = _single_valuation(inst)
    unit = inst.with_customers(Customer(c.start, c.end, 1) for c in inst.customers)
    split = split_at_pivot(unit, h)
    n = inst.n

    sigma = [Fraction(0)] * n
    sigma[h - 1] = Fraction(1)
    sigma_profit = profit(unit, sigma)

    tau = [Fraction(0)] * n
    if split.line_instance is not None:
        sub = line_single_val_subroutine(split.line_instance, dicut, seed, restarts)
        for item, pos in split.relabel.items():
            tau[item - 1] = sub.prices[pos - 1]
    classes = _classify(unit, split, tau)

    best = None
    for x in PIVOT_PRICES:
        tau[h - 1] = Fraction(x)
        value = profit(unit, tau)
        if best is None or value > best[1]:
            best = (tuple(tau), value, x)
    tau_prices, tau_profit, pivot_price = best
    paid = payments(unit, tau_prices)
    profit_in = sum((paid[j] for j in split.e_in), Fraction(0))

    if sigma_profit > tau_profit:
        prices, value, source = tuple(sigma), sigma_profit, "sigma"
    else:
        prices, value, source = tau_prices, tau_profit, "tau"
    a = CERTIFIED_A[dicut]
    return SingleValReport(
        prices=tuple(p * w for p in prices), profit=value * w, h=h,
        sigma_profit=sigma_profit * w, tau_profit=tau_profit * w, profit_in=profit_in * w,
        pivot_price=pivot_price, classes=classes, a=a,
        certified_ratio=single_val_ratio(a), source=source)


def cyc_single_val(inst: Instance, h: Optional[int] = None, dicut: str = "exact", seed=None,
                   restarts: int = 4) -> SingleValReport:
    """Single-valuation cycle pricing around pivot ``h``.

    Without ``h`` every item is tried as the pivot and the most profitable
    result is kept (smallest pivot on ties).
    """
    _require_cycle(inst)
    _single_valuation(inst)
    if dicut not in DICUT_STRATEGIES:
        raise ValueError(f"unknown dicut strategy {dicut!r}")
    if h is not None:
        return _single_pivot(inst, h, dicut, seed, restarts)
    best = None
    for pivot in range(1, inst.n + 1):
        report = _single_pivot(inst, pivot, dicut, seed, restarts)
        if best is None or report.profit > best.profit:
            best = report
    return best
