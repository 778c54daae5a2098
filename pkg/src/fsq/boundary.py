"""Self-similar boundary of a fractal square dendrite and its type A/B/C/D3/D6.

The boundary is the union of the translate intersections F_a over the
offsets actually realized between digit cells.  For dendrites every such
F_a is empty or a single point, the union has 2, 3, 4 or 6 points, and the
pattern of active faces picks exactly one of six shapes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .core import (
    DEFAULT_CELL_BUDGET,
    DigitSet,
    Point,
    TheoremViolation,
    UNIT_CORNERS,
    cell_offsets,
    is_diagonal,
    is_side,
    refine,
)
from .graphs import is_dendrite
from .intersections import all_intersections


class BoundaryType(enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D3 = "D3"
    D6 = "D6"
    SEGMENT = "Segment"


@dataclass(frozen=True)
class BoundaryReport:
    type: BoundaryType
    points: tuple  # ((Point, "corner"|"side"), ...)
    active_faces: frozenset
    offset_faces: frozenset
    corner_orders: dict
    violations: tuple = field(default_factory=tuple)


def offset_faces(D: DigitSet) -> frozenset:
    """Raw offset-based face set: a is in it when some digit pair differs by a."""
    return cell_offsets(D)


def active_faces(D: DigitSet) -> frozenset:
    """Realized offsets whose translate intersection is nonempty.

    Both conditions matter: an unrealized offset never occurs between
    pieces even if F_a is huge, and a realized offset with empty F_a
    contributes no boundary point.
    """
    inter = all_intersections(D)
    return frozenset(a for a in cell_offsets(D) if not inter[a].is_empty)


def _require_dendrite(D: DigitSet):
    flag, report = is_dendrite(D)
    if not flag:
        raise ValueError(f"not a dendrite (failed gate: {report.failed_gate})")


def boundary_points(D: DigitSet) -> tuple:
    """Deduplicated union of the singleton F_a over the active faces."""
    _require_dendrite(D)
    inter = all_intersections(D)
    pts = set()
    for a in active_faces(D):
        pts.update(inter[a].points)
    return tuple(sorted(pts))


def classify_boundary(D: DigitSet) -> BoundaryType:
    """Match the active-face pattern against the six admissible shapes."""
    _require_dendrite(D)
    active = active_faces(D)
    sides = frozenset(a for a in active if is_side(a))
    diags = frozenset(a for a in active if is_diagonal(a))
    n_pts = len(boundary_points(D))
    if len(active) <= 2 and len({frozenset((a, (-a[0], -a[1]))) for a in active}) <= 1:
        return BoundaryType.SEGMENT
    if len(sides) == 4 and not diags:
        return BoundaryType.A
    if len(diags) == 4 and not sides:
        return BoundaryType.B
    if len(sides) == 2 and len(diags) == 2:
        return BoundaryType.C
    if len(sides) == 4 and len(diags) == 2:
        if n_pts == 3:
            return BoundaryType.D3
        if n_pts == 6:
            return BoundaryType.D6
        raise TheoremViolation(
            f"all-sides-plus-one-diagonal dendrite with {n_pts} boundary points "
            f"(expected 3 or 6): {D}"
        )
    raise TheoremViolation(
        f"dendrite with unclassifiable active faces {sorted(active)}: {D}"
    )


def corner_points(D: DigitSet) -> tuple:
    """Corners of the unit square that belong to the attractor."""
    top = D.n - 1
    present = []
    for corner, digit in zip(UNIT_CORNERS, ((0, 0), (top, 0), (0, top), (top, top))):
        if digit in D:
            present.append(corner)
    return tuple(sorted(present))


def corner_report(D: DigitSet) -> dict:
    """Orders of the attractor's corner points (each is at most 2)."""
    from .orders import point_order  # deferred: orders builds on this module

    _require_dendrite(D)
    return {c: point_order(D, c).order for c in corner_points(D)}


def _adjacent_corners(a: Point, b: Point) -> bool:
    return (a.x == b.x) != (a.y == b.y)


def validate_corner_orders(btype: BoundaryType, orders: dict) -> tuple:
    """Check the per-type corner constraints, returning violation strings."""
    problems = []
    for c, o in orders.items():
        if o > 2:
            problems.append(f"corner {c} has order {o} > 2")
    corners = sorted(orders)
    if btype is BoundaryType.B:
        if len(corners) != 4 or any(orders[c] != 1 for c in corners):
            problems.append(f"type B must have four corners of order 1, got {orders}")
    elif btype is BoundaryType.D3:
        if len(corners) != 3 or any(orders[c] != 1 for c in corners):
            problems.append(f"type D3 must have three corners of order 1, got {orders}")
    elif btype is BoundaryType.A:
        if len(corners) > 2:
            problems.append(f"type A allows at most two corners, got {len(corners)}")
        elif len(corners) == 2:
            if not _adjacent_corners(*corners):
                problems.append(f"type A corners {corners} are not adjacent")
            if sorted(orders.values()) not in ([1, 1], [1, 2]):
                problems.append(f"type A corner orders must be (1,1) or (2,1), got {orders}")
    elif btype in (BoundaryType.C, BoundaryType.D6):
        if len(corners) != 2 or _adjacent_corners(*corners):
            problems.append(
                f"type {btype.value} must have exactly two opposite corners, got {corners}"
            )
    return tuple(problems)


def quadruple_free(D: DigitSet, k_max: int = 3, budget: int = DEFAULT_CELL_BUDGET) -> bool:
    """No forbidden 2x2-style digit quadruple up to refinement level k_max.

    The default pattern is the axis-aligned block {d, d-(1,0), d-(0,1),
    d-(1,1)}; when the active faces form the one-diagonal-one-side pattern
    the block is re-oriented by that diagonal and side.
    """
    alpha, beta = (1, 0), (0, 1)
    active = active_faces(D)
    sides = [a for a in active if is_side(a)]
    diags = [a for a in active if is_diagonal(a)]
    if len(sides) == 2 and len(diags) == 2:
        alpha = max(diags)
        beta = max(sides)
    offsets = (alpha, beta, (alpha[0] + beta[0], alpha[1] + beta[1]))
    for k in range(1, k_max + 1):
        cells = refine(D, k, budget)
        for c in cells:
            if all((c[0] - o[0], c[1] - o[1]) in cells for o in offsets):
                return False
    return True


def boundary_report(D: DigitSet) -> BoundaryReport:
    """Full boundary classification with corner orders and constraint checks."""
    btype = classify_boundary(D)
    pts = boundary_points(D)
    tagged = tuple(
        (p, "corner" if p in UNIT_CORNERS else "side") for p in pts
    )
    orders = corner_report(D)
    violations = list(validate_corner_orders(btype, orders))
    expected = {
        BoundaryType.SEGMENT: (2,),
        BoundaryType.D3: (3,),
        BoundaryType.A: (4,),
        BoundaryType.B: (4,),
        BoundaryType.C: (4,),
        BoundaryType.D6: (6,),
    }[btype]
    if len(pts) not in expected:
        violations.append(
            f"boundary of type {btype.value} has {len(pts)} points, expected {expected}"
        )
    return BoundaryReport(
        type=btype,
        points=tagged,
        active_faces=active_faces(D),
        offset_faces=offset_faces(D),
        corner_orders=orders,
        violations=tuple(violations),
    )
