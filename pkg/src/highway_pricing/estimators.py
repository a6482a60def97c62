"""scikit-learn style wrappers around the pricing algorithms.

``fit`` takes an instance (or its JSON-shaped description) and stores the
price vector; ``predict`` returns what each customer of an instance over
the same items would pay, and ``score`` the total coupon profit.

>>> from highway_pricing import Customer, Instance
>>> from highway_pricing.estimators import LineCutPricer
>>> inst = Instance("line", 2, (Customer(1, 1, 1), Customer(2, 2, 2)))
>>> LineCutPricer().fit(inst).profit_
Fraction(2, 1)
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .core import Instance, ValidationError, payments, profit, validate_instance
from .cycle import cyc_single_val, cycle_sl
from .line import line_combined, line_cut, line_random
from .tree import tree_random


def check_instance(X, topology: Optional[str] = None, n: Optional[int] = None) -> Instance:
    """Validate ``X`` as an instance, optionally pinning topology and size."""
    if isinstance(X, Mapping):
        X = validate_instance(X)
    if not isinstance(X, Instance):
        raise ValidationError(f"expected an Instance or instance mapping, got {type(X).__name__}")
    if topology is not None and X.topology != topology:
        raise ValidationError(f"expected a {topology} instance, got {X.topology}")
    if n is not None and X.n != n:
        raise ValidationError(f"instance has {X.n} items, pricer was fitted on {n}")
    return X


class BasePricer(BaseEstimator):
    topology: Optional[str] = None

    def _run(self, inst: Instance):
        raise NotImplementedError

    def fit(self, X, y=None):
        inst = check_instance(X, self.topology)
        self.report_ = self._run(inst)
        self.prices_ = tuple(self.report_.prices)
        self.profit_ = profit(inst, self.prices_)
        self.n_items_ = inst.n
        return self

    def predict(self, X) -> list[Fraction]:
        check_is_fitted(self, "prices_")
        inst = check_instance(X, self.topology, self.n_items_)
        return payments(inst, self.prices_)

    def score(self, X, y=None) -> Fraction:
        check_is_fitted(self, "prices_")
        inst = check_instance(X, self.topology, self.n_items_)
        return profit(inst, self.prices_)


class LineRandomPricer(BasePricer):
    topology = "line"

    def __init__(self, random_state=None):
        self.random_state = random_state

    def _run(self, inst):
        return line_random(inst, self.random_state)


class LineCutPricer(BasePricer):
    topology = "line"

    def __init__(self, strategy="derandomized", random_state=None):
        self.strategy = strategy
        self.random_state = random_state

    def _run(self, inst):
        return line_cut(inst, self.strategy, self.random_state)


class LinePricer(BasePricer):
    """Better of random partial sums and the cut pricing."""

    topology = "line"

    def __init__(self, strategy="derandomized", random_state=None):
        self.strategy = strategy
        self.random_state = random_state

    def _run(self, inst):
        return line_combined(inst, self.random_state, self.strategy)


class CyclePricer(BasePricer):
    topology = "cycle"

    def __init__(self, strategy="derandomized", random_state=None):
        self.strategy = strategy
        self.random_state = random_state

    def _run(self, inst):
        return cycle_sl(inst, self.strategy, self.random_state)


class SingleValuationCyclePricer(BasePricer):
    topology = "cycle"

    def __init__(self, dicut="exact", pivot=None, restarts=4, random_state=None):
        self.dicut = dicut
        self.pivot = pivot
        self.restarts = restarts
        self.random_state = random_state

    def _run(self, inst):
        return cyc_single_val(inst, self.pivot, self.dicut, self.random_state, self.restarts)


class TreeRandomPricer(BasePricer):
    topology = "tree"

    def __init__(self, root=None, random_state=None):
        self.root = root
        self.random_state = random_state

    def _run(self, inst):
        return tree_random(inst, self.random_state, self.root)
