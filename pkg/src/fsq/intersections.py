"""Intersections F_a = K ∩ (K + a) of a fractal square with its translates.

Only four of the eight translates are independent (F(-a) = F(a) - a).
Diagonal translates meet in at most one corner point; side translates obey
a self-similar equation whose classification mirrors the segment
trichotomy: the overlap digits G decide empty / finite / countable /
uncountable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .core import (
    Cardinality,
    DigitSet,
    FACES,
    FsqError,
    HALF_FACES,
    Point,
    cell_offsets,
    cell_offsets_closure,
    g_sets,
    is_diagonal,
    is_side,
    neg,
    perp,
    point,
)

# Conditions for the one-point corner intersections: for each diagonal a,
# the corner of the unit square that F_a can be, and the two extreme digits
# that must both be present.
_CORNER_RULES = {
    (1, 1): ((1, 1), lambda n: ((n - 1, n - 1), (0, 0))),
    (-1, -1): ((0, 0), lambda n: ((n - 1, n - 1), (0, 0))),
    (1, -1): ((1, 0), lambda n: ((n - 1, 0), (0, n - 1))),
    (-1, 1): ((0, 1), lambda n: ((n - 1, 0), (0, n - 1))),
}


@dataclass(frozen=True)
class IntersectionSet:
    """One F_a, classified by cardinality with exact witnesses."""

    alpha: tuple
    kind: Cardinality
    points: tuple = ()
    fixed_point: Point | None = None
    seeds: tuple = ()
    generator_digits: frozenset = field(default_factory=frozenset)

    @property
    def is_empty(self) -> bool:
        return self.kind is Cardinality.EMPTY

    @property
    def is_singleton(self) -> bool:
        return self.kind is Cardinality.FINITE and len(self.points) == 1

    @property
    def is_finite(self) -> bool:
        return self.kind in (Cardinality.EMPTY, Cardinality.FINITE)

    def translate(self, v, n: int) -> "IntersectionSet":
        """The isometric copy F(a) + v = F(a + 2v) when v = -a.

        Generator digits shift by (n-1)v so the orbit description keeps
        satisfying its own set equation on the translated face.
        """
        s = n - 1
        return IntersectionSet(
            alpha=(self.alpha[0] + 2 * v[0], self.alpha[1] + 2 * v[1]),
            kind=self.kind,
            points=tuple(p.translate(v) for p in self.points),
            fixed_point=self.fixed_point.translate(v) if self.fixed_point else None,
            seeds=tuple(p.translate(v) for p in self.seeds),
            generator_digits=frozenset(
                (g[0] + s * v[0], g[1] + s * v[1]) for g in self.generator_digits
            ),
        )


def corner_intersection(D: DigitSet, alpha) -> IntersectionSet:
    """F_a for a diagonal translate: one corner point or empty."""
    if not is_diagonal(alpha):
        raise ValueError(f"corner_intersection needs a diagonal vector, got {alpha}")
    corner, need = _CORNER_RULES[alpha]
    d1, d2 = need(D.n)
    if d1 in D and d2 in D:
        return IntersectionSet(alpha, Cardinality.FINITE, points=(point(*corner),))
    return IntersectionSet(alpha, Cardinality.EMPTY)


def side_intersection(D: DigitSet, alpha) -> IntersectionSet:
    """F_a for a side translate, via its self-similar set equation.

    With G the self-overlap digits and the two adjacent corner sets scaled
    into the face, the classification is:
      #G >= 2                     -> uncountable (generated by G)
      #G == 1, corner terms empty -> the single fixed point d0/(n-1)
      #G == 1, corner terms there -> countable: fixed point plus seed orbit
      #G == 0                     -> finite: just the scaled corner terms
    """
    if not is_side(alpha):
        raise ValueError(f"side_intersection needs a side vector, got {alpha}")
    n = D.n
    beta = perp(alpha)
    g0, g_plus, g_minus = g_sets(D, alpha, beta)
    corner_plus = corner_intersection(D, (alpha[0] + beta[0], alpha[1] + beta[1]))
    corner_minus = corner_intersection(D, (alpha[0] - beta[0], alpha[1] - beta[1]))
    seeds = {
        Point(Fraction(q.x + g[0], n), Fraction(q.y + g[1], n))
        for q, gs in ((p, g_plus) for p in corner_plus.points)
        for g in gs
    }
    seeds |= {
        Point(Fraction(q.x + g[0], n), Fraction(q.y + g[1], n))
        for q, gs in ((p, g_minus) for p in corner_minus.points)
        for g in gs
    }

    if len(g0) >= 2:
        return IntersectionSet(alpha, Cardinality.UNCOUNTABLE, generator_digits=frozenset(g0))
    if len(g0) == 1:
        d0 = next(iter(g0))
        fixed = Point(Fraction(d0[0], n - 1), Fraction(d0[1], n - 1))
        if seeds:
            return IntersectionSet(
                alpha,
                Cardinality.COUNTABLE,
                fixed_point=fixed,
                seeds=tuple(sorted(seeds)),
                generator_digits=frozenset(g0),
            )
        result = IntersectionSet(alpha, Cardinality.FINITE, points=(fixed,))
        _check_self_equation(result, g0, seeds, n)
        return result
    if not seeds:
        return IntersectionSet(alpha, Cardinality.EMPTY)
    result = IntersectionSet(alpha, Cardinality.FINITE, points=tuple(sorted(seeds)))
    _check_self_equation(result, g0, seeds, n)
    return result


def _check_self_equation(f: IntersectionSet, g0, seeds, n):
    # A finite F must reproduce itself: F = (F + G)/n ∪ scaled corner terms.
    pts = set(f.points)
    regenerated = {
        Point(Fraction(p.x + g[0], n), Fraction(p.y + g[1], n)) for p in pts for g in g0
    } | set(seeds)
    if regenerated != pts:
        raise FsqError(
            f"finite intersection for {f.alpha} fails its set equation: "
            f"{sorted(pts)} vs {sorted(regenerated)}"
        )


@lru_cache(maxsize=4096)
def all_intersections(D: DigitSet) -> dict:
    """F_a for all 8 nonzero faces; the negatives come from translation."""
    out = {}
    for alpha in HALF_FACES:
        f = side_intersection(D, alpha) if is_side(alpha) else corner_intersection(D, alpha)
        out[alpha] = f
        out[neg(alpha)] = f.translate(neg(alpha), D.n)
    return out


def one_point_property(D: DigitSet) -> bool:
    """Do distinct level-1 pieces meet in at most one point?

    Quantifies over offsets actually realized between digit cells: an F_a on
    an unrealized offset never materializes between pieces.
    """
    inter = all_intersections(D)
    return all(
        inter[alpha].is_empty or inter[alpha].is_singleton
        for alpha in cell_offsets(D)
    )


def finite_intersection_property(D: DigitSet) -> bool:
    """Are all same-rank piece intersections finite (at any rank)?"""
    inter = all_intersections(D)
    return all(inter[alpha].is_finite for alpha in cell_offsets_closure(D))


def max_piece_intersection(D: DigitSet) -> int | None:
    """Largest cardinality of a same-rank piece intersection; None = infinite.

    Same-rank pieces meet in similar copies of the F_a for offsets realized
    at some refinement level, so the maximum is taken over that closure.
    """
    inter = all_intersections(D)
    best = 0
    for alpha in cell_offsets_closure(D):
        f = inter[alpha]
        if not f.is_finite:
            return None
        best = max(best, len(f.points))
    return best
