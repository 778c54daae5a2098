"""Full per-digit-set classification: one call drives the whole pipeline.

Collects every theorem-style check as a violation string instead of
raising, so a census can sweep thousands of digit sets and surface
potential counterexamples; stages that exhaust a budget or fail to
stabilize are recorded as inconclusive rather than silently skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import CellBudgetError, DigitSet, StabilizationError, TheoremViolation
from .boundary import BoundaryReport, BoundaryType, boundary_report, quadruple_free
from .graphs import ConnectivityReport, is_dendrite
from .intersections import all_intersections, max_piece_intersection, one_point_property
from .maintree import MainTreeReport, PERMITTED_CASES, classify_main_tree
from .orders import OrderCensus, order_census
from .segments import finite_bound

MAX_POINT_ORDER = 4


@dataclass(frozen=True)
class Classification:
    digit_set: DigitSet
    connected: bool
    one_point: bool
    dendrite: bool
    connectivity: ConnectivityReport
    intersections: dict
    max_finite_intersection: int | None  # None = infinite
    quadruple_free: bool | None
    boundary: BoundaryReport | None = None
    main_tree: MainTreeReport | None = None
    orders: OrderCensus | None = None
    violations: tuple = field(default_factory=tuple)
    inconclusive: tuple = field(default_factory=tuple)


def classify(
    D: DigitSet,
    order_level: int = 2,
    tree_k_max: int = 6,
    quad_k_max: int = 3,
) -> Classification:
    """Run connectivity, intersection, boundary, tree and order analysis."""
    violations = []
    inconclusive = []
    inter = all_intersections(D)
    dendrite, conn = is_dendrite(D)
    one_point = one_point_property(D)
    max_fint = max_piece_intersection(D)

    piece_bound = max(1, finite_bound(D.n))
    if max_fint is not None and max_fint > piece_bound:
        violations.append(
            f"finite piece intersections of size {max_fint} exceed "
            f"max(1, floor((n-2)/2)) = {piece_bound}"
        )

    quadfree = None
    try:
        quadfree = quadruple_free(D, quad_k_max)
    except CellBudgetError as exc:
        inconclusive.append(f"quadruple scan: {exc}")

    boundary = None
    tree = None
    orders = None
    if dendrite:
        if quadfree is False:
            violations.append(
                f"dendrite contains a forbidden digit quadruple within level {quad_k_max}"
            )
        try:
            boundary = boundary_report(D)
            violations.extend(boundary.violations)
        except TheoremViolation as exc:
            violations.append(str(exc))
        except (CellBudgetError, StabilizationError) as exc:
            inconclusive.append(f"boundary: {exc}")

        try:
            tree = classify_main_tree(D, k_max=tree_k_max)
            if tree.shape.type_id is None:
                violations.append(
                    f"stabilized main-tree shape {tree.shape.encoding} matches no catalog type"
                )
            elif boundary is not None and boundary.type is not None:
                if boundary.type not in PERMITTED_CASES[tree.shape.type_id]:
                    violations.append(
                        f"main-tree type {tree.shape.type_id} is not permitted "
                        f"with boundary type {boundary.type.value}"
                    )
        except StabilizationError as exc:
            inconclusive.append(f"main tree: {exc}")
        except CellBudgetError as exc:
            inconclusive.append(f"main tree: {exc}")

        try:
            orders = order_census(D, order_level)
            if orders.max_order > MAX_POINT_ORDER:
                violations.append(
                    f"point order {orders.max_order} exceeds the bound {MAX_POINT_ORDER}"
                )
        except (CellBudgetError, StabilizationError) as exc:
            inconclusive.append(f"orders: {exc}")

    return Classification(
        digit_set=D,
        connected=conn.connected,
        one_point=one_point,
        dendrite=dendrite,
        connectivity=conn,
        intersections=inter,
        max_finite_intersection=max_fint,
        quadruple_free=quadfree,
        boundary=boundary,
        main_tree=tree,
        orders=orders,
        violations=tuple(dict.fromkeys(violations)),
        inconclusive=tuple(inconclusive),
    )
