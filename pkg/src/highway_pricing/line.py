"""Line highway algorithms: random partial sums, the directed-cut pricing,
and their combination."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .bounds import Bound, cut_bound, line_random_bound, theorem3_bound
from .core import Instance, ValidationError, boundary_graph, profit, valuation_profile
from .cuts import Marking, best_marking, crossing, pairwise_space, random_marking

STRATEGIES = ("random", "derandomized")


@dataclass(frozen=True)
class LineRunReport:
    prices: tuple[Fraction, ...]
    profit: Fraction
    chosen_x: Optional[int] = None
    marking: Optional[Marking] = None
    bound: Optional[Bound] = None
    source: str = ""


def _require_line(inst: Instance) -> None:
    if inst.topology != "line":
        raise ValidationError(f"expected a line instance, got {inst.topology}")


def _ell(inst: Instance) -> int:
    return max(inst.valuations, default=0)


def random_partial_sums(n: int, ell: int, seed=None) -> np.ndarray:
    """Independent uniform integers in ``{0..ell}`` for ``u_0..u_n``."""
    return np.random.default_rng(seed).integers(0, ell + 1, size=n + 1)


def line_random(inst: Instance, seed=None) -> LineRunReport:
    _require_line(inst)
    sums = random_partial_sums(inst.n, _ell(inst), seed)
    return line_random_from_sums(inst, sums)


def line_random_from_sums(inst: Instance, sums) -> LineRunReport:
    prices = tuple(Fraction(int(sums[i]) - int(sums[i - 1])) for i in range(1, inst.n + 1))
    bound = line_random_bound(valuation_profile(inst).r) if inst.m else None
    return LineRunReport(prices, profit(inst, prices), bound=bound, source="random")


def line_random_expected_profit(inst: Instance) -> Fraction:
    """Closed-form expected coupon profit of :func:`line_random`.

    A customer with valuation ``x`` pays ``k`` with probability
    ``(ell + 1 - k)/(ell + 1)^2`` for ``k = 1..x``.
    """
    _require_line(inst)
    if not inst.m:
        return Fraction(0)
    prof = valuation_profile(inst)
    ell = prof.ell
    return sum((Fraction(m_x * x * (x + 1) * (-2 * x + 3 * ell + 2), 6 * (ell + 1) ** 2)
                for x, m_x in prof.counts.items()), Fraction(0))


def cut_prices(n: int, marking: Marking, x: int) -> tuple[Fraction, ...]:
    """Prices from partial sums 0 on ``L`` and ``x`` on ``R``."""
    sums = [0 if marking.left[v] else x for v in range(n + 1)]
    return tuple(Fraction(sums[i] - sums[i - 1]) for i in range(1, n + 1))


def line_cut_from_marking(inst: Instance, marking: Marking) -> LineRunReport:
    _require_line(inst)
    if not inst.m:
        return LineRunReport((Fraction(0),) * inst.n, Fraction(0), marking=marking, source="cut")
    prof = valuation_profile(inst)
    best = None
    for x in range(prof.s, prof.ell + 1):
        prices = cut_prices(inst.n, marking, x)
        value = profit(inst, prices)
        if best is None or value > best[1]:
            best = (prices, value, x)
    return LineRunReport(best[0], best[1], best[2], marking, cut_bound(prof.r), "cut")


def line_cut(inst: Instance, strategy: str = "derandomized", seed=None) -> LineRunReport:
    """Price from one directed cut of the boundary DAG.

    ``random`` marks each boundary with probability 1/2; ``derandomized``
    takes the heaviest cut over the pairwise-independent sample space.
    Among the per-``x`` price vectors the smallest ``x`` wins ties.
    """
    _require_line(inst)
    if strategy == "random":
        marking = random_marking(inst.n + 1, seed)
    elif strategy == "derandomized":
        marking = best_marking(boundary_graph(inst), pairwise_space(inst.n + 1)).marking
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return line_cut_from_marking(inst, marking)


class IdentityCheck(NamedTuple):
    value: Fraction
    reconstructed: Fraction
    difference: Fraction


def line_cut_identity_check(inst: Instance, marking: Marking) -> IdentityCheck:
    """Kept weight against ``P(tau_s) + sum_{x > s} P(tau_x)/x``."""
    _require_line(inst)
    value = Fraction(crossing(boundary_graph(inst), marking).value)
    if not inst.m:
        return IdentityCheck(value, Fraction(0), value)
    prof = valuation_profile(inst)
    total = profit(inst, cut_prices(inst.n, marking, prof.s))
    for x in range(prof.s + 1, prof.ell + 1):
        total += profit(inst, cut_prices(inst.n, marking, x)) / x
    return IdentityCheck(value, total, value - total)


def line_combined(inst: Instance, seed=None, strategy: str = "derandomized") -> LineRunReport:
    """Better of :func:`line_random` and :func:`line_cut`; the cut wins ties."""
    _require_line(inst)
    sigma = line_random(inst, seed)
    tau = line_cut(inst, strategy, seed)
    chosen = tau if tau.profit >= sigma.profit else sigma
    bound = theorem3_bound(valuation_profile(inst).r) if inst.m else None
    return LineRunReport(chosen.prices, chosen.profit, chosen.chosen_x, chosen.marking, bound,
                         chosen.source)
