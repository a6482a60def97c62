"""Instance model, exact profit evaluation and the boundary-graph view.

Items are numbered ``1..n``. A line customer buys the interval
``start..end``; a cycle customer buys the clockwise run from ``start`` to
``end`` (wrapping through ``n -> 1`` when ``start > end``); a tree customer
buys every item on the path between ``start`` and ``end``.

All money is :class:`fractions.Fraction`. Nothing in this module touches
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

TOPOLOGIES = ("line", "cycle", "tree")
MODELS = ("positive", "discount", "bounded", "coupon")


class ValidationError(ValueError):
    """Raised for malformed instances; ``customer`` names the offender."""

    def __init__(self, message: str, customer: Optional[int] = None):
        if customer is not None:
            message = f"customer {customer}: {message}"
        super().__init__(message)
        self.customer = customer


class PriceConstraintError(ValueError):
    """A price vector violates the constraint of the requested model."""

    def __init__(self, message: str, item: Optional[int] = None):
        if item is not None:
            message = f"item {item}: {message}"
        super().__init__(message)
        self.item = item


class GuardError(RuntimeError):
    """An enumeration would exceed its size cap."""


@dataclass(frozen=True)
class Customer:
    start: int
    end: int
    valuation: int


@dataclass(frozen=True)
class Instance:
    """A reduced highway instance ``G = (V, E, {w_j})``.

    ``parents`` is only used for trees: ``parents[i - 1]`` is the parent of
    item ``i`` and the root is marked with 0.
    """

    topology: str
    n: int
    customers: tuple[Customer, ...]
    parents: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "customers", tuple(self.customers))
        if self.parents is not None:
            object.__setattr__(self, "parents", tuple(self.parents))
        _check(self)

    @property
    def m(self) -> int:
        return len(self.customers)

    @property
    def valuations(self) -> tuple[int, ...]:
        return tuple(c.valuation for c in self.customers)

    @property
    def total_valuation(self) -> int:
        return sum(self.valuations)

    @cached_property
    def bundles(self) -> tuple[tuple[int, ...], ...]:
        """Items bought by each customer, in traversal order."""
        return tuple(self._bundle(c) for c in self.customers)

    @cached_property
    def root(self) -> Optional[int]:
        if self.parents is None:
            return None
        return self.parents.index(0) + 1

    def _bundle(self, c: Customer) -> tuple[int, ...]:
        if self.topology == "line":
            return tuple(range(c.start, c.end + 1))
        if self.topology == "cycle":
            if c.start <= c.end:
                return tuple(range(c.start, c.end + 1))
            return tuple(range(c.start, self.n + 1)) + tuple(range(1, c.end + 1))
        return tree_path(self.parents, c.start, c.end)

    def with_customers(self, customers: Iterable[Customer]) -> "Instance":
        return Instance(self.topology, self.n, tuple(customers), self.parents)


def tree_path(parents: Sequence[int], a: int, b: int) -> tuple[int, ...]:
    """Items on the unique path from ``a`` to ``b`` (both inclusive)."""
    up_a = _ancestors(parents, a)
    up_b = _ancestors(parents, b)
    on_b = set(up_b)
    for k, item in enumerate(up_a):
        if item in on_b:
            lca_b = up_b.index(item)
            return tuple(up_a[: k + 1]) + tuple(reversed(up_b[:lca_b]))
    raise ValidationError(f"items {a} and {b} are not connected")


def _ancestors(parents: Sequence[int], item: int) -> list[int]:
    chain = [item]
    while parents[chain[-1] - 1] != 0:
        chain.append(parents[chain[-1] - 1])
        if len(chain) > len(parents):
            raise ValidationError("parent map has a cycle")
    return chain


def _check(inst: Instance) -> None:
    if inst.topology not in TOPOLOGIES:
        raise ValidationError(f"unknown topology {inst.topology!r}")
    if not isinstance(inst.n, int) or inst.n < 1:
        raise ValidationError(f"item count must be a positive integer, got {inst.n!r}")
    n = inst.n
    if inst.topology == "tree":
        _check_parents(inst.parents, n)
    elif inst.parents is not None:
        raise ValidationError("parents are only allowed for tree instances")
    for j, c in enumerate(inst.customers):
        if not isinstance(c, Customer):
            raise ValidationError("not a Customer", j)
        for name in ("start", "end", "valuation"):
            if not isinstance(getattr(c, name), int) or isinstance(getattr(c, name), bool):
                raise ValidationError(f"{name} must be an integer", j)
        if not (1 <= c.start <= n and 1 <= c.end <= n):
            raise ValidationError(f"item index out of range [1, {n}]: ({c.start}, {c.end})", j)
        if c.valuation < 1:
            raise ValidationError(f"valuation must be >= 1, got {c.valuation}", j)
        if inst.topology == "line" and c.start > c.end:
            raise ValidationError(f"start > end on line: ({c.start}, {c.end})", j)
        if inst.topology == "cycle":
            size = (c.end - c.start) % n + 1
            if size >= n:
                raise ValidationError(f"full-cycle bundle ({c.start}, {c.end}) on n={n}", j)


def _check_parents(parents, n: int) -> None:
    if parents is None:
        raise ValidationError("tree instance needs a parent map")
    if len(parents) != n:
        raise ValidationError(f"parent map has {len(parents)} entries, expected {n}")
    if any(not isinstance(p, int) or p < 0 or p > n for p in parents):
        raise ValidationError("parent entries must be integers in [0, n]")
    if sum(1 for p in parents if p == 0) != 1:
        raise ValidationError("parent map must mark exactly one root with 0")
    for i, p in enumerate(parents, start=1):
        if p == i:
            raise ValidationError(f"item {i} is its own parent")
    for i in range(1, n + 1):
        _ancestors(parents, i)


def validate_instance(raw: Mapping) -> Instance:
    """Build an :class:`Instance` from the JSON-shaped instance description."""
    if not isinstance(raw, Mapping):
        raise ValidationError("instance description must be a mapping")
    try:
        topology = raw["topology"]
        n = raw["n"]
        raw_customers = raw.get("customers", [])
    except KeyError as exc:
        raise ValidationError(f"missing field {exc.args[0]!r}") from None
    customers = []
    for j, c in enumerate(raw_customers):
        try:
            customers.append(Customer(c["start"], c["end"], c["w"]))
        except (KeyError, TypeError):
            raise ValidationError("needs integer fields start, end, w", j) from None
    parents = raw.get("parents")
    return Instance(topology, n, tuple(customers), None if parents is None else tuple(parents))


def instance_to_dict(inst: Instance) -> dict:
    out = {
        "topology": inst.topology,
        "n": inst.n,
        "customers": [{"start": c.start, "end": c.end, "w": c.valuation} for c in inst.customers],
    }
    if inst.parents is not None:
        out["parents"] = list(inst.parents)
    return out


# -- prices -----------------------------------------------------------------

def as_prices(values: Iterable, n: Optional[int] = None) -> tuple[Fraction, ...]:
    """Coerce ``values`` to an exact price vector, checking its length."""
    prices = tuple(Fraction(v) for v in values)
    if n is not None and len(prices) != n:
        raise ValueError(f"price vector has length {len(prices)}, expected {n}")
    return prices


def bundle_sums(inst: Instance, prices: Sequence[Fraction]) -> list[Fraction]:
    """``p(e_j)`` for every customer, by direct summation over the bundle."""
    if len(prices) != inst.n:
        raise ValueError(f"price vector has length {len(prices)}, expected {inst.n}")
    return [sum((prices[i - 1] for i in bundle), Fraction(0)) for bundle in inst.bundles]


def payments(inst: Instance, prices: Sequence[Fraction]) -> list[Fraction]:
    """What each customer pays under the coupon model (0 if they decline)."""
    out = []
    for c, total in zip(inst.customers, bundle_sums(inst, prices)):
        out.append(max(total, Fraction(0)) if total <= c.valuation else Fraction(0))
    return out


def profit(inst: Instance, prices: Sequence, model: str = "coupon", bound: Optional[int] = None) -> Fraction:
    """Seller profit of ``prices`` under one of the four price models.

    ``bound`` is the loss cap ``B`` of the bounded-discount model.
    """
    prices = as_prices(prices, inst.n)
    if model == "positive":
        for i, p in enumerate(prices, start=1):
            if p < 0:
                raise PriceConstraintError(f"negative price {p} in the positive model", i)
    elif model == "bounded":
        if bound is None:
            raise ValueError("bounded model needs a bound B")
        for i, p in enumerate(prices, start=1):
            if p < -bound:
                raise PriceConstraintError(f"price {p} below -B = {-bound}", i)
    elif model == "coupon":
        return sum(payments(inst, prices), Fraction(0))
    elif model != "discount":
        raise ValueError(f"unknown price model {model!r}")
    total = Fraction(0)
    for c, s in zip(inst.customers, bundle_sums(inst, prices)):
        if s <= c.valuation:
            total += s
    return total


# -- valuation profile ------------------------------------------------------

@dataclass(frozen=True)
class ValuationProfile:
    s: int
    ell: int
    counts: Mapping[int, int]

    @property
    def r(self) -> Fraction:
        return Fraction(self.s, self.ell)


def valuation_profile(inst_or_valuations) -> ValuationProfile:
    """Smallest and largest valuation plus ``m_x`` for every ``x`` in ``[s, ell]``."""
    vals = (inst_or_valuations.valuations if isinstance(inst_or_valuations, Instance)
            else tuple(inst_or_valuations))
    if not vals:
        raise ValueError("valuation profile of an empty customer list")
    s, ell = min(vals), max(vals)
    counts = {x: 0 for x in range(s, ell + 1)}
    for w in vals:
        counts[w] += 1
    return ValuationProfile(s, ell, counts)


# -- boundary graph ---------------------------------------------------------

class Arc(NamedTuple):
    tail: int
    head: int
    weight: int
    customer: int


@dataclass(frozen=True)
class BoundaryGraph:
    """Customers as weighted arcs between the boundaries of their bundles.

    Line boundaries are ``u_0..u_n`` (``u_i`` sits after item ``i``).
    Cycle boundaries are ``b_0..b_{n-1}`` with ``b_i`` after item ``i`` and
    ``b_0`` after item ``n``.
    """

    vertex_count: int
    arcs: tuple[Arc, ...]
    topology: str

    @property
    def total_weight(self) -> int:
        return sum(a.weight for a in self.arcs)

    @property
    def endpoints(self) -> frozenset[int]:
        return frozenset(v for a in self.arcs for v in (a.tail, a.head))


def boundary_graph(inst: Instance) -> BoundaryGraph:
    if inst.topology == "line":
        arcs = tuple(Arc(c.start - 1, c.end, c.valuation, j) for j, c in enumerate(inst.customers))
        return BoundaryGraph(inst.n + 1, arcs, "line")
    if inst.topology == "cycle":
        n = inst.n
        arcs = tuple(Arc((c.start - 1) % n, c.end % n, c.valuation, j)
                     for j, c in enumerate(inst.customers))
        return BoundaryGraph(n, arcs, "cycle")
    raise ValidationError("tree instances have no boundary graph")


# -- partial sums (line indexing) -------------------------------------------

def partial_sums_from_prices(prices: Sequence) -> tuple[Fraction, ...]:
    sums = [Fraction(0)]
    for p in prices:
        sums.append(sums[-1] + Fraction(p))
    return tuple(sums)


def prices_from_partial_sums(sums: Sequence, n: Optional[int] = None) -> tuple[Fraction, ...]:
    if n is None:
        n = len(sums) - 1
    if len(sums) != n + 1 or any(s is None for s in sums):
        raise ValueError(f"need partial sums on all {n + 1} boundaries u_0..u_{n}")
    sums = [Fraction(s) for s in sums]
    return tuple(sums[i] - sums[i - 1] for i in range(1, n + 1))
