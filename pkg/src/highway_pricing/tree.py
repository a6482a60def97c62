"""Random partial sums on a rooted tree."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .bounds import Bound, tree_bound
from .core import Instance, ValidationError, profit, valuation_profile


@dataclass(frozen=True)
class RootedTreeView:
    root: int
    parent: dict
    order: tuple[int, ...]


def rooted_view(inst: Instance, root: Optional[int] = None) -> RootedTreeView:
    """Re-root the instance's tree at ``root`` (default: its own root)."""
    if inst.topology != "tree":
        raise ValidationError(f"expected a tree instance, got {inst.topology}")
    if root is None:
        root = inst.root
    if not 1 <= root <= inst.n:
        raise ValueError(f"root {root} out of range [1, {inst.n}]")
    adj = {i: [] for i in range(1, inst.n + 1)}
    for i, p in enumerate(inst.parents, start=1):
        if p:
            adj[i].append(p)
            adj[p].append(i)
    parent = {root: 0}
    order = []
    queue = deque([root])
    while queue:
        v = queue.popleft()
        order.append(v)
        for u in sorted(adj[v]):
            if u not in parent:
                parent[u] = v
                queue.append(u)
    return RootedTreeView(root, parent, tuple(order))


@dataclass(frozen=True)
class TreeRunReport:
    prices: tuple[Fraction, ...]
    profit: Fraction
    root: int
    bound: Optional[Bound] = None


def tree_prices(view: RootedTreeView, sums) -> tuple[Fraction, ...]:
    """``p_i = s_i - s_parent(i)``; the root's reference sum is 0.

    ``sums[i - 1]`` is the partial sum of item ``i``.
    """
    n = len(sums)
    return tuple(Fraction(int(sums[i - 1]) - (int(sums[view.parent[i] - 1]) if view.parent[i] else 0))
                 for i in range(1, n + 1))


def tree_random(inst: Instance, seed=None, root: Optional[int] = None) -> TreeRunReport:
    view = rooted_view(inst, root)
    ell = max(inst.valuations, default=0)
    sums = np.random.default_rng(seed).integers(0, ell + 1, size=inst.n)
    prices = tree_prices(view, sums)
    bound = tree_bound(valuation_profile(inst).r) if inst.m else None
    return TreeRunReport(prices, profit(inst, prices), view.root, bound)
