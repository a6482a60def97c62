"""Approximation-ratio bounds proved for each algorithm.

Ratios involving logarithms are evaluated in :mod:`decimal` at 40 digits;
comparisons against exact profits go through :func:`satisfies`.
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

PRECISION = 40


class Bound(NamedTuple):
    ratio: Decimal
    regime: str


def to_decimal(q) -> Decimal:
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = PRECISION
        return Decimal(q.numerator) / Decimal(q.denominator)


def _h(x: Decimal) -> Decimal:
    # 3/x - 4(1 - ln x), decreasing on (0, 3/4)
    return Decimal(3) / x - 4 * (1 - x.ln())


@lru_cache(maxsize=None)
def alpha_root(tol: Decimal = Decimal("1e-30")) -> Decimal:
    """Root of ``3/x = 4(1 - ln x)`` in ``[0.3, 0.5]`` by bisection."""
    with localcontext() as ctx:
        ctx.prec = PRECISION
        lo, hi = Decimal("0.3"), Decimal("0.5")
        f_lo = _h(lo)
        if f_lo * _h(hi) >= 0:
            raise ArithmeticError("bracket does not straddle the root")
        while hi - lo > tol:
            mid = (lo + hi) / 2
            f_mid = _h(mid)
            if (f_mid > 0) == (f_lo > 0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        return (lo + hi) / 2


def log_ratio(r) -> Decimal:
    """``4(1 - ln r)``."""
    with localcontext() as ctx:
        ctx.prec = PRECISION
        return 4 * (1 - to_decimal(r).ln())


def _check_r(r) -> Fraction:
    r = Fraction(r)
    if not 0 < r <= 1:
        raise ValueError(f"valuation ratio r must lie in (0, 1], got {r}")
    return r


def theorem3_bound(r) -> Bound:
    """Ratio of the combined line algorithm as a function of ``r = s/ell``."""
    r = _check_r(r)
    alpha = alpha_root()
    rd = to_decimal(r)
    with localcontext() as ctx:
        ctx.prec = PRECISION
        inv_sqrt_e = Decimal(1) / Decimal(1).exp().sqrt()
        if rd <= alpha or rd >= inv_sqrt_e:
            return Bound(log_ratio(r), "4(1-ln r)")
        if r <= Fraction(1, 2):
            return Bound(to_decimal(3 / r), "3/r")
        return Bound(Decimal(6), "6")


def line_random_bound(r) -> Bound:
    r = _check_r(r)
    if r <= Fraction(1, 2):
        return Bound(to_decimal(3 / r), "3/r")
    return Bound(Decimal(6), "6")


def cut_bound(r) -> Bound:
    return Bound(log_ratio(_check_r(r)), "4(1-ln r)")


def harmonic_factor(s: int, ell: int) -> Fraction:
    """``1 + sum_{k=s+1}^{ell} 1/k``, the exact factor behind ``1 - ln r``."""
    return 1 + sum((Fraction(1, k) for k in range(s + 1, ell + 1)), Fraction(0))


def tree_bound(r) -> Bound:
    r = _check_r(r)
    return Bound(to_decimal(Fraction(16) / (3 * r)), "16/(3r)")


def single_val_ratio(a) -> Fraction:
    """``(3a + 4)/4`` for a line subroutine with ratio ``a``."""
    a = Fraction(a)
    return (3 * a + 4) / 4


def satisfies(opt, achieved, ratio, slack=0) -> bool:
    """``opt <= ratio * (achieved + slack)`` compared at 40 digits."""
    with localcontext() as ctx:
        ctx.prec = PRECISION
        lhs = to_decimal(opt)
        rhs = Decimal(ratio) * (to_decimal(achieved) + to_decimal(slack))
        return lhs <= rhs
