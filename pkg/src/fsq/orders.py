"""Menger–Urysohn orders of points in a fractal square dendrite.

The order of p is the number of connected components of K minus p.  The
primary computation is branch counting with refinement: delete the level-k
pieces containing p (and the black vertex at p, if any) from the level-k
tree and count the resulting forest's components.  The count can wobble
while the deleted blob still swallows whole branches, so counting starts
only past the longest address preperiod and stops when two consecutive
levels agree.  A piece-decomposition recursion provides an independent
cross-check at points lying in several pieces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import (
    DEFAULT_CELL_BUDGET,
    DigitSet,
    Point,
    StabilizationError,
    containing_cells,
    point_addresses,
)
from .graphs import adjacency_structure, structure_components

DEFAULT_ORDER_LEVEL_CAP = 8


@dataclass(frozen=True)
class OrderResult:
    point: Point
    order: int
    method: str  # "branch counting" or "multi-piece recursion"
    stabilized_at_level: int
    counts: tuple = ()


def _branch_count(D: DigitSet, p: Point, addresses, k: int, budget) -> int:
    structure = adjacency_structure(D, k, budget)
    cells = containing_cells(p, D, k, addresses)
    white_index = {c: i for i, c in enumerate(structure.whites)}
    skip = {white_index[c] for c in cells}
    for b, (q, _) in enumerate(structure.blacks):
        if q == p:
            skip.add(structure.n_white + b)
    return structure_components(structure, frozenset(skip))


def point_order(
    D: DigitSet,
    p: Point,
    k_max: int = DEFAULT_ORDER_LEVEL_CAP,
    budget: int = DEFAULT_CELL_BUDGET,
) -> OrderResult:
    """Order of p in the attractor by branch counting with refinement."""
    addresses = point_addresses(p, D)
    if not addresses:
        raise ValueError(f"point {p} is not in the attractor")
    k_start = max(1, max(len(a.preperiod) for a in addresses) + 1)
    counts = []
    for k in range(k_start, k_max + 1):
        counts.append(_branch_count(D, p, addresses, k, budget))
        if len(counts) >= 2 and counts[-1] == counts[-2]:
            return OrderResult(
                point=p,
                order=counts[-1],
                method="branch counting",
                stabilized_at_level=k,
                counts=tuple(counts),
            )
    raise StabilizationError(
        f"branch counts {counts} for {p} did not stabilize by level {k_max}"
    )


def multi_piece_order(
    D: DigitSet,
    p: Point,
    k_max: int = DEFAULT_ORDER_LEVEL_CAP,
    budget: int = DEFAULT_CELL_BUDGET,
) -> OrderResult:
    """Order via the piece decomposition Ord(p) = sum of orders of preimages.

    Applicable when p lies in at least two level-1 pieces: in a dendrite
    those pieces meet only at p, so the branches through each piece are
    disjoint and the suborders (computed by branch counting) add up.
    """
    cells = containing_cells(p, D, 1)
    if len(cells) < 2:
        raise ValueError(f"{p} lies in a single piece; the decomposition is trivial")
    n = D.n
    total = 0
    for (cx, cy) in sorted(cells):
        pre = Point(p.x * n - cx, p.y * n - cy)
        total += point_order(D, pre, k_max, budget).order
    return OrderResult(
        point=p,
        order=total,
        method="multi-piece recursion",
        stabilized_at_level=1,
        counts=(),
    )


def corner_order(D: DigitSet, corner: Point) -> int:
    """Order of a unit-square corner point of the attractor."""
    from .boundary import corner_points

    if corner not in corner_points(D):
        raise ValueError(f"{corner} is not a corner point of the attractor")
    return point_order(D, corner).order


@dataclass(frozen=True)
class OrderCensus:
    max_order: int
    histogram: dict
    entries: tuple  # OrderResult per evaluated point
    ramification_points: tuple  # (Point, order) with order >= 3


def _reduced_order(D: DigitSet, p: Point, memo: dict, budget) -> OrderResult:
    """Order with memoized single-piece descent.

    A point interior to one piece has the order of its preimage under that
    piece map; descending the preperiod grounds in a multi-piece point or a
    periodic point, both handled by branch counting.
    """
    chain = []
    cur = p
    while True:
        if cur in memo:
            result = memo[cur]
            break
        addresses = point_addresses(cur, D)
        if not addresses:
            raise ValueError(f"point {cur} is not in the attractor")
        cells = containing_cells(cur, D, 1, addresses)
        if len(cells) >= 2 or cur in chain:
            result = point_order(D, cur, budget=budget)
            break
        chain.append(cur)
        (cx, cy) = next(iter(cells))
        cur = Point(cur.x * D.n - cx, cur.y * D.n - cy)
    for q in chain:
        if q not in memo:
            memo[q] = OrderResult(
                point=q,
                order=result.order,
                method="multi-piece recursion",
                stabilized_at_level=result.stabilized_at_level,
                counts=(),
            )
    memo[cur] = result
    return memo[p]


def order_census(
    D: DigitSet,
    k: int = 2,
    budget: int = DEFAULT_CELL_BUDGET,
) -> OrderCensus:
    """Orders over the structurally interesting points of a dendrite.

    Evaluates every black vertex up to level k, every boundary point, every
    corner point of the attractor, the main tree's ramification limit
    points, and the level-<=k piece images of those limits (images inside a
    single piece inherit the order of their preimage).
    """
    from .boundary import boundary_points, corner_points
    from .maintree import ramification_points

    points = set()
    for level in range(1, k + 1):
        structure = adjacency_structure(D, level, budget)
        points.update(q for q, _ in structure.blacks)
    points.update(boundary_points(D))
    points.update(corner_points(D))
    rams = ramification_points(D)
    points.update(rams)
    n = D.n
    images = set(rams)
    for _ in range(k):
        images = {
            Point(Fraction(q.x + d[0], n), Fraction(q.y + d[1], n))
            for q in images
            for d in D.digits
        }
        points.update(images)

    memo = {}
    entries = []
    for p in sorted(points):
        entries.append(_reduced_order(D, p, memo, budget))
    histogram = {}
    for e in entries:
        histogram[e.order] = histogram.get(e.order, 0) + 1
    ram_list = tuple((e.point, e.order) for e in entries if e.order >= 3)
    return OrderCensus(
        max_order=max(e.order for e in entries) if entries else 0,
        histogram=histogram,
        entries=tuple(entries),
        ramification_points=ram_list,
    )
