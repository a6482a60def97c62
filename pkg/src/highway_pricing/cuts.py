"""Markings of boundary vertices and directed-cut accounting.

A marking splits the boundary vertices into a marked side ``L`` and an
unmarked side ``R``; an arc is kept when it runs from ``L`` to ``R``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .core import Arc, BoundaryGraph, GuardError

EXACT_DICUT_MAX_VERTICES = 22


@dataclass(frozen=True)
class Marking:
    """``left[v]`` is True when boundary vertex ``v`` is on the ``L`` side."""

    left: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(bool(b) for b in self.left))

    def __len__(self):
        return len(self.left)

    @classmethod
    def from_sides(cls, vertex_count: int, left: Iterable[int]) -> "Marking":
        chosen = set(left)
        return cls(tuple(v in chosen for v in range(vertex_count)))

    @property
    def left_set(self) -> frozenset[int]:
        return frozenset(v for v, b in enumerate(self.left) if b)

    def side(self, v: int) -> str:
        return "L" if self.left[v] else "R"

    def flipped(self, v: int) -> "Marking":
        sides = list(self.left)
        sides[v] = not sides[v]
        return Marking(tuple(sides))


@dataclass(frozen=True)
class CutResult:
    marking: Marking
    kept: tuple[Arc, ...]
    value: int
    counts: Mapping[int, int]


def crossing(graph: BoundaryGraph, marking: Marking) -> CutResult:
    if len(marking) != graph.vertex_count:
        raise ValueError(
            f"marking covers {len(marking)} vertices, graph has {graph.vertex_count}")
    left = marking.left
    kept = tuple(a for a in graph.arcs if left[a.tail] and not left[a.head])
    counts = Counter(a.weight for a in kept)
    return CutResult(marking, kept, sum(a.weight for a in kept), dict(sorted(counts.items())))


def random_marking(vertex_count: int, seed=None) -> Marking:
    """Each vertex lands in ``L`` independently with probability 1/2."""
    if vertex_count < 1:
        raise ValueError("need at least one vertex")
    bits = np.random.default_rng(seed).integers(0, 2, size=vertex_count)
    return Marking(tuple(bits == 1))


def pairwise_space(k: int) -> list[Marking]:
    """Pairwise-independent uniform markings of ``k`` vertices.

    Vertex ``i`` gets the nonzero label ``i + 1`` in ``GF(2)^d`` with
    ``d = ceil(log2(k + 1))``; at sample point ``x`` it is marked ``L`` iff
    the inner product of its label with ``x`` is 0. Distinct nonzero labels
    make every pair of vertices uniform over the four side combinations.
    """
    if k < 1:
        raise ValueError("need at least one vertex")
    d = k.bit_length()
    return [Marking(tuple(bin((i + 1) & x).count("1") % 2 == 0 for i in range(k)))
            for x in range(2 ** d)]


def best_marking(graph: BoundaryGraph, candidates: Sequence[Marking]) -> CutResult:
    """Candidate with the largest kept weight; the first one wins ties."""
    if not candidates:
        raise ValueError("no candidate markings")
    best = None
    for marking in candidates:
        result = crossing(graph, marking)
        if best is None or result.value > best.value:
            best = result
    return best


def exact_max_dicut(graph: BoundaryGraph, max_vertices: int = EXACT_DICUT_MAX_VERTICES) -> CutResult:
    """Maximum directed cut by enumerating all ``2^k`` markings.

    Among optimal markings the one whose L-indicator vector
    ``(ind_0, ..., ind_{k-1})`` is lexicographically smallest is returned.
    """
    k = graph.vertex_count
    if k > max_vertices:
        raise GuardError(
            f"exact max-dicut enumerates 2^{k} markings (cap 2^{max_vertices}); "
            "use local_search_dicut instead")
    # vertex v is bit (k-1-v), so ascending mask order is lexicographic order
    masks = np.arange(2 ** k, dtype=np.int64)
    values = np.zeros(2 ** k, dtype=np.int64)
    for a in graph.arcs:
        tail_left = (masks >> (k - 1 - a.tail)) & 1
        head_left = (masks >> (k - 1 - a.head)) & 1
        values += a.weight * (tail_left & (1 - head_left))
    best = int(np.argmax(values))
    marking = Marking(tuple((best >> (k - 1 - v)) & 1 == 1 for v in range(k)))
    return crossing(graph, marking)


def _insert_arc(marking: Marking, arc: Arc) -> Marking:
    sides = list(marking.left)
    sides[arc.tail], sides[arc.head] = True, False
    return Marking(tuple(sides))


def _local_optimum(graph: BoundaryGraph, marking: Marking) -> CutResult:
    """Improve by single flips, then by forcing a non-kept arc across.

    The arc move escapes the 1-flip optimum where an arc runs R -> L.
    """
    current = crossing(graph, marking)
    improved = True
    while improved:
        improved = False
        moves = [current.marking.flipped(v) for v in range(graph.vertex_count)]
        moves += [_insert_arc(current.marking, a) for a in graph.arcs if a not in current.kept]
        for move in moves:
            candidate = crossing(graph, move)
            if candidate.value > current.value:
                current = candidate
                improved = True
                break
    return current


def local_search_dicut(graph: BoundaryGraph, seed=None, restarts: int = 1,
                       warm_start: Optional[Marking] = None) -> CutResult:
    """Best local optimum (single flips and arc insertions) over several starts.

    The first start is ``warm_start`` when given, otherwise the best marking
    of the pairwise-independent space, so the result never falls below a
    quarter of the total arc weight. Remaining starts are random.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    k = graph.vertex_count
    if warm_start is None:
        warm_start = best_marking(graph, pairwise_space(k)).marking
    rng = np.random.default_rng(seed)
    starts = [warm_start]
    for _ in range(restarts - 1):
        starts.append(Marking(tuple(rng.integers(0, 2, size=k) == 1)))
    best = None
    for start in starts:
        result = _local_optimum(graph, start)
        if best is None or result.value > best.value:
            best = result
    return best
