"""Intersections of fractal segments (the one-dimensional theory).

A fractal segment of order n with digit set D ⊂ {0,…,n−1} is the compact
K ⊂ [0,1] with K = (K+D)/n.  The intersection of two such segments is
governed by the overlap sets G_a = D1 ∩ (D2 − a) for a ∈ {−1,0,1} and is
empty, finite, countable with an explicit generator, or uncountable.
Besides standalone use, this trichotomy is the projection backend for the
side faces of fractal squares.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .core import Cardinality, FsqError, Rational, TheoremViolation


@dataclass(frozen=True)
class SegmentDigitSet:
    """Digit subset of {0,…,n−1} defining a fractal segment."""

    n: int
    digits: tuple

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"order must be an integer >= 2, got {self.n!r}")
        ds = sorted({int(d) for d in self.digits})
        if not ds or len(ds) > self.n:
            raise ValueError(f"need between 1 and {self.n} digits, got {len(ds)}")
        if ds[0] < 0 or ds[-1] >= self.n:
            raise ValueError(f"digits {ds} outside 0..{self.n - 1}")
        object.__setattr__(self, "digits", tuple(ds))

    @property
    def m(self) -> int:
        return len(self.digits)

    @property
    def degenerate(self) -> bool:
        """A single digit gives a one-point attractor, not a segment."""
        return self.m == 1

    @cached_property
    def digit_set(self) -> frozenset:
        return frozenset(self.digits)

    def __str__(self) -> str:
        return f"{self.n}: {','.join(str(d) for d in self.digits)}"


@dataclass(frozen=True)
class SegmentIntersection:
    """Cardinality-classified description of K1 ∩ K2.

    Finite: `points` is the sorted full list.
    CountablyInfinite: the set is {fixed_point} ∪ {S^k(s) : s ∈ seeds, k ≥ 0}
    where S(x) = (x + d0)/n is the map of the single overlap digit d0.
    Uncountable: `generator_digits` is the overlap set G0 with #G0 ≥ 2.
    """

    kind: Cardinality
    n: int
    points: tuple = ()
    fixed_point: Rational | None = None
    seeds: tuple = ()
    generator_digits: frozenset = field(default_factory=frozenset)

    def expand(self, count: int) -> tuple:
        """First `count` points (all of them when the set is finite)."""
        if self.kind in (Cardinality.EMPTY, Cardinality.FINITE):
            return self.points[:count]
        if self.kind is Cardinality.UNCOUNTABLE:
            raise FsqError("cannot enumerate an uncountable intersection")
        d0 = next(iter(self.generator_digits))
        out = {self.fixed_point}
        layer = list(self.seeds)
        while len(out) < count and layer:
            out.update(layer)
            layer = [(x + d0) / self.n for x in layer]
        return tuple(sorted(out)[:count])


def _corner_sets(D1: SegmentDigitSet, D2: SegmentDigitSet):
    """The one-point translate intersections F_1 and F_-1.

    K1 ∩ (K2 + 1) can only be {1}, needing 1 ∈ K1 and 0 ∈ K2; mirrored for
    K1 ∩ (K2 − 1) = {0}.
    """
    n = D1.n
    f_pos = (Fraction(1),) if (n - 1) in D1.digit_set and 0 in D2.digit_set else ()
    f_neg = (Fraction(0),) if 0 in D1.digit_set and (n - 1) in D2.digit_set else ()
    return f_pos, f_neg


def segment_intersect(D1: SegmentDigitSet, D2: SegmentDigitSet) -> SegmentIntersection:
    """Classify F0 = K1 ∩ K2 for fractal segments of the same order."""
    if D1.n != D2.n:
        raise ValueError(f"mismatched orders {D1.n} != {D2.n}")
    n = D1.n
    g0 = D1.digit_set & D2.digit_set
    g_pos = D1.digit_set & {d - 1 for d in D2.digit_set}
    g_neg = D1.digit_set & {d + 1 for d in D2.digit_set}
    f_pos, f_neg = _corner_sets(D1, D2)
    seeds = {Fraction(f + g, n) for f in f_pos for g in g_pos}
    seeds |= {Fraction(f + g, n) for f in f_neg for g in g_neg}

    if len(g0) >= 2:
        return SegmentIntersection(Cardinality.UNCOUNTABLE, n, generator_digits=frozenset(g0))
    if len(g0) == 1:
        d0 = next(iter(g0))
        fixed = Fraction(d0, n - 1)
        if seeds:
            return SegmentIntersection(
                Cardinality.COUNTABLE,
                n,
                fixed_point=fixed,
                seeds=tuple(sorted(seeds)),
                generator_digits=frozenset(g0),
            )
        return _finite(n, {fixed})
    return _finite(n, seeds)


def _finite(n, pts) -> SegmentIntersection:
    pts = tuple(sorted(pts))
    if not pts:
        return SegmentIntersection(Cardinality.EMPTY, n)
    bound = max(1, finite_bound(n))
    if len(pts) > bound:
        raise TheoremViolation(
            f"finite segment intersection with {len(pts)} points exceeds "
            f"the bound max(1, floor((n-2)/2)) = {bound}"
        )
    return SegmentIntersection(Cardinality.FINITE, n, points=pts)


def junction_points(D1: SegmentDigitSet, D2: SegmentDigitSet) -> tuple:
    """Points k/n where the two segments meet through adjacent digits.

    Requires 0 ∈ D1, n−1 ∈ D2 so that 0 ∈ K1 and 1 ∈ K2; then every k ∈ D1
    with k−1 ∈ D2 yields the common point k/n.
    """
    if D1.n != D2.n:
        raise ValueError(f"mismatched orders {D1.n} != {D2.n}")
    if 0 not in D1.digit_set or (D1.n - 1) not in D2.digit_set:
        raise ValueError("junction points need 0 in D1 and n-1 in D2")
    return tuple(
        sorted(Fraction(k, D1.n) for k in D1.digits if (k - 1) in D2.digit_set)
    )


def finite_bound(n: int) -> int:
    """Cardinality bound floor((n-2)/2) for finite segment intersections."""
    if n < 2:
        raise ValueError("order must be >= 2")
    return (n - 2) // 2
