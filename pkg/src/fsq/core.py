"""Exact model of fractal squares: digit sets, faces, refinements, addresses.

A fractal square of order n with digit set D ⊂ {0,…,n−1}² is the unique
compact K ⊂ [0,1]² with K = (K + D)/n.  Every question downstream (piece
intersections, connectivity, boundary type, point orders) reduces to
integer and rational arithmetic on D, so this module is all-integer and
all-Fraction; floating point never appears.
"""

from __future__ import annotations

import enum
import json
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

# Exact scalar type used for every coordinate.
Rational = Fraction

DEFAULT_CELL_BUDGET = 10**7

# Nonzero face vectors of the unit square, alpha in {-1,0,1}^2.
SIDES = ((1, 0), (-1, 0), (0, 1), (0, -1))
DIAGONALS = ((1, 1), (-1, -1), (1, -1), (-1, 1))
FACES = SIDES + DIAGONALS

# One representative per antipodal pair; the other four follow from
# F(-a) = F(a) - a.
HALF_FACES = ((1, 0), (0, 1), (1, 1), (1, -1))


class FsqError(Exception):
    """Base class for analysis failures that are not plain usage errors."""


class CellBudgetError(FsqError):
    """A refinement would materialize more cells than the configured budget."""


class TheoremViolation(FsqError):
    """An input broke an invariant the classification relies on.

    Raised instead of crashing so that census runs can collect potential
    counterexamples; the CLI maps it to exit code 3.
    """


class StabilizationError(FsqError):
    """An iterative computation did not settle within its level cap."""


class BranchingAddressError(FsqError):
    """The residual automaton of a point branches unboundedly.

    This means the point has infinitely many addresses, which cannot happen
    once the one-point intersection property holds; failing loudly beats
    looping forever on non-dendrite inputs.
    """


def is_side(alpha) -> bool:
    return abs(alpha[0]) + abs(alpha[1]) == 1


def is_diagonal(alpha) -> bool:
    return abs(alpha[0]) == 1 and abs(alpha[1]) == 1


def neg(alpha):
    return (-alpha[0], -alpha[1])


def perp(alpha):
    """Canonical side vector orthogonal to a side vector."""
    if not is_side(alpha):
        raise ValueError(f"not a side vector: {alpha}")
    return (0, 1) if alpha[1] == 0 else (1, 0)


@dataclass(frozen=True, order=True)
class Point:
    """Exact point of the plane."""

    x: Fraction
    y: Fraction

    def translate(self, v) -> "Point":
        return Point(self.x + v[0], self.y + v[1])

    def scale(self, num: int, den: int = 1) -> "Point":
        return Point(self.x * num / den, self.y * num / den)

    def __str__(self) -> str:
        return f"{self.x},{self.y}"


def point(x, y) -> Point:
    """Build a Point from ints/Fractions/strings like '1/2'."""
    return Point(Fraction(x), Fraction(y))


UNIT_CORNERS = (point(0, 0), point(1, 0), point(0, 1), point(1, 1))


def in_unit_square(p: Point) -> bool:
    return 0 <= p.x <= 1 and 0 <= p.y <= 1


@dataclass(frozen=True)
class DigitSet:
    """Order n plus the digit subset of the n×n grid; the sole input object.

    Digits are deduplicated and stored row-major (by y, then x), so equal
    digit sets compare and hash equal.
    """

    n: int
    digits: tuple

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"order must be an integer >= 2, got {self.n!r}")
        seen = []
        for d in self.digits:
            d = (int(d[0]), int(d[1]))
            if not (0 <= d[0] < self.n and 0 <= d[1] < self.n):
                raise ValueError(f"digit {d} outside the {self.n}x{self.n} grid")
            if d not in seen:
                seen.append(d)
        m = len(seen)
        if not 1 < m < self.n * self.n:
            raise ValueError(
                f"digit count m={m} must satisfy 1 < m < n^2 = {self.n * self.n}"
            )
        object.__setattr__(self, "digits", tuple(sorted(seen, key=lambda d: (d[1], d[0]))))

    @property
    def m(self) -> int:
        return len(self.digits)

    @cached_property
    def digit_set(self) -> frozenset:
        return frozenset(self.digits)

    def __contains__(self, d) -> bool:
        return tuple(d) in self.digit_set

    def text(self) -> str:
        pairs = " ".join(f"{x},{y}" for x, y in self.digits)
        return f"{self.n}: {pairs}"

    def __str__(self) -> str:
        return self.text()


def parse_digit_set(text: str) -> DigitSet:
    """Parse the `"<n>: x,y x,y ..."` text form or its JSON equivalent."""
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
            n, digits = obj["n"], obj["digits"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValueError(f"malformed JSON digit set: {exc}") from exc
        return _checked_digit_set(n, [tuple(d) for d in digits])
    head, sep, rest = text.partition(":")
    if not sep:
        raise ValueError("expected '<n>: x,y x,y ...' or a JSON object")
    try:
        n = int(head.strip())
    except ValueError as exc:
        raise ValueError(f"bad order {head.strip()!r}") from exc
    digits = []
    for token in rest.split():
        parts = token.split(",")
        if len(parts) != 2:
            raise ValueError(f"bad digit token {token!r}, expected 'x,y'")
        try:
            digits.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ValueError(f"bad digit token {token!r}") from exc
    return _checked_digit_set(n, digits)


def _checked_digit_set(n, digits) -> DigitSet:
    if len(set(digits)) != len(digits):
        warnings.warn("duplicate digits in digit set; deduplicated", stacklevel=3)
    return DigitSet(n, tuple(digits))


def refine(D: DigitSet, k: int, budget: int = DEFAULT_CELL_BUDGET) -> frozenset:
    """Level-k cell positions D^k in the n^k grid; #D^k = m^k.

    D^0 is the single cell (0,0) by convention (the unit square itself).
    """
    if k < 0:
        raise ValueError("refinement level must be >= 0")
    if D.m**k > budget:
        raise CellBudgetError(
            f"refinement level {k} needs {D.m ** k} cells, budget is {budget}"
        )
    cells = {(0, 0)}
    n = D.n
    for _ in range(k):
        cells = {(n * cx + dx, n * cy + dy) for (cx, cy) in cells for (dx, dy) in D.digits}
    return frozenset(cells)


def face_digits(D: DigitSet, alpha) -> frozenset:
    """Digits of D lying on the alpha-face of the (n-1)-scaled square."""
    a, b = alpha
    top = D.n - 1
    out = set()
    for x, y in D.digits:
        if a == 1 and x != top:
            continue
        if a == -1 and x != 0:
            continue
        if b == 1 and y != top:
            continue
        if b == -1 and y != 0:
            continue
        out.add((x, y))
    return frozenset(out)


def g_sets(D: DigitSet, alpha, beta=None):
    """The three digit sets driving the side-face self-equation.

    For a side vector alpha and the orthogonal side beta:
      G        = D_a ∩ (D_-a + (n-1)a)          (self-recursive part)
      G_plus   = D_a ∩ (D_-a + (n-1)a - beta)    (pairs with the a+beta corner)
      G_minus  = D_a ∩ (D_-a + (n-1)a + beta)    (pairs with the a-beta corner)
    """
    if not is_side(alpha):
        raise ValueError(f"g_sets needs a side vector, got {alpha}")
    if beta is None:
        beta = perp(alpha)
    elif not (is_side(beta) and beta[0] * alpha[0] + beta[1] * alpha[1] == 0):
        raise ValueError(f"beta={beta} is not a side vector orthogonal to {alpha}")
    d_a = face_digits(D, alpha)
    d_na = face_digits(D, neg(alpha))
    s = D.n - 1
    shifted = {(x + s * alpha[0], y + s * alpha[1]) for x, y in d_na}
    g0 = d_a & shifted
    gp = d_a & {(x - beta[0], y - beta[1]) for x, y in shifted}
    gm = d_a & {(x + beta[0], y + beta[1]) for x, y in shifted}
    return g0, gp, gm


def cell_offsets(D: DigitSet) -> frozenset:
    """Nonzero face vectors realized as differences of digit cells."""
    ds = D.digit_set
    out = set()
    for x, y in ds:
        for alpha in FACES:
            if (x + alpha[0], y + alpha[1]) in ds:
                out.add(alpha)
    return frozenset(out)


def cell_offsets_closure(D: DigitSet) -> frozenset:
    """Face vectors realized between same-rank cells at *some* refinement level.

    Level k+1 cells are n*c + d, so an offset a appears at level k+1 exactly
    when a = n*delta + (d - d') for a level-k cell offset delta (or 0) and
    digits d, d'.  The map is monotone, so iterating to a fixed point gives
    the union over all levels.
    """
    diffs = {(a[0] - b[0], a[1] - b[1]) for a in D.digits for b in D.digits}
    n = D.n
    offsets = set(cell_offsets(D))
    while True:
        new = set(offsets)
        for delta in offsets:
            for dx, dy in diffs:
                a = (n * delta[0] + dx, n * delta[1] + dy)
                if a != (0, 0) and abs(a[0]) <= 1 and abs(a[1]) <= 1:
                    new.add(a)
        if new == offsets:
            return frozenset(offsets)
        offsets = new


class Cardinality(enum.Enum):
    """Cardinality class of an intersection set."""

    EMPTY = "empty"
    FINITE = "finite"
    COUNTABLE = "countably-infinite"
    UNCOUNTABLE = "uncountable"


@dataclass(frozen=True)
class Address(object):
    """Eventually periodic digit expansion of a point.

    Canonical form has a primitive period and the shortest preperiod (a
    trailing preperiod digit equal to the last period digit is absorbed by
    rotating the period).
    """

    preperiod: tuple
    period: tuple

    @staticmethod
    def of(preperiod, period) -> "Address":
        pre = tuple(tuple(d) for d in preperiod)
        per = tuple(tuple(d) for d in period)
        if per:
            for plen in range(1, len(per) + 1):
                if len(per) % plen == 0 and per == per[:plen] * (len(per) // plen):
                    per = per[:plen]
                    break
            while pre and pre[-1] == per[-1]:
                pre = pre[:-1]
                per = (per[-1],) + per[:-1]
        return Address(pre, per)

    def digits_prefix(self, k: int) -> tuple:
        """First k digits of the expansion."""
        if k <= len(self.preperiod):
            return self.preperiod[:k]
        if not self.period:
            raise ValueError("truncated address has no digits beyond its preperiod")
        tail = k - len(self.preperiod)
        reps = -(-tail // len(self.period))
        return self.preperiod + (self.period * reps)[:tail]

    def sort_key(self):
        return (self.preperiod, self.period)

    def __str__(self) -> str:
        pre = " ".join(f"{x},{y}" for x, y in self.preperiod)
        per = " ".join(f"{x},{y}" for x, y in self.period)
        return f"[{pre} | ({per})*]" if pre else f"[({per})*]"


def address_point(addr: Address, D: DigitSet) -> Point:
    """Exact point of the address: x = sum of digit/n^k over the expansion."""
    for d in addr.preperiod + addr.period:
        if d not in D:
            raise ValueError(f"address digit {d} not in the digit set")
    if not addr.period:
        raise ValueError("address needs a nonempty period to denote a point")
    n = D.n
    coords = []
    for axis in (0, 1):
        pre_val = 0
        for d in addr.preperiod:
            pre_val = pre_val * n + d[axis]
        per_val = 0
        for d in addr.period:
            per_val = per_val * n + d[axis]
        pv = len(addr.preperiod)
        lv = len(addr.period)
        coords.append(
            Fraction(pre_val * (n**lv - 1) + per_val, n**pv * (n**lv - 1))
        )
    return Point(coords[0], coords[1])


_MAX_RESIDUAL_STATES = 200_000


def point_addresses(p: Point, D: DigitSet) -> tuple:
    """All addresses of p under D, empty if p is not in the attractor.

    Runs the residual automaton: from state r the digit d is readable when
    n*r - d stays in the unit square.  Rational states repeat, so every
    address is eventually periodic; the enumeration walks the live part of
    the automaton and closes each cycle once.
    """
    if not in_unit_square(p):
        raise ValueError(f"point {p} outside the unit square")
    n = D.n
    succs = {}
    frontier = [p]
    while frontier:
        r = frontier.pop()
        if r in succs:
            continue
        out = []
        for d in D.digits:
            q = Point(r.x * n - d[0], r.y * n - d[1])
            if in_unit_square(q):
                out.append((d, q))
        succs[r] = out
        for _, q in out:
            if q not in succs:
                frontier.append(q)
        if len(succs) > _MAX_RESIDUAL_STATES:
            raise FsqError(f"residual automaton of {p} exceeds {_MAX_RESIDUAL_STATES} states")

    # Live states are those admitting an infinite continuation: the greatest
    # set in which every state keeps a successor.
    live = set(succs)
    changed = True
    while changed:
        changed = False
        for r in list(live):
            if not any(q in live for _, q in succs[r]):
                live.discard(r)
                changed = True
    if p not in live:
        return ()

    live_succs = {r: [(d, q) for d, q in succs[r] if q in live] for r in live}

    def reachable(starts):
        seen = set(starts)
        stack = list(starts)
        while stack:
            r = stack.pop()
            for _, q in live_succs[r]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return seen

    cyclic = {r for r in live if r in reachable([q for _, q in live_succs[r]])}
    downstream = reachable(cyclic)
    if any(len(live_succs[r]) > 1 for r in downstream):
        raise BranchingAddressError(
            f"point {p} has infinitely many addresses (branching inside a cycle)"
        )

    # Finitely many walks: depth-first, closing each walk at its first repeat.
    addresses = set()
    path_digits = []
    pos = {p: 0}
    stack = [(p, iter(live_succs[p]))]
    while stack:
        r, it = stack[-1]
        step = next(it, None)
        if step is None:
            stack.pop()
            if path_digits:
                path_digits.pop()
            pos.pop(r, None)
            continue
        d, q = step
        if q in pos:
            cut = pos[q]
            digits = path_digits + [d]
            addresses.add(Address.of(digits[:cut], digits[cut:]))
        else:
            pos[q] = len(path_digits) + 1
            path_digits.append(d)
            stack.append((q, iter(live_succs[q])))
    return tuple(sorted(addresses, key=Address.sort_key))


def containing_cells(p: Point, D: DigitSet, k: int, addresses=None) -> frozenset:
    """Level-k cells whose pieces contain p (address prefixes of length k)."""
    if addresses is None:
        addresses = point_addresses(p, D)
    n = D.n
    cells = set()
    for addr in addresses:
        cx = cy = 0
        for dx, dy in addr.digits_prefix(k):
            cx = cx * n + dx
            cy = cy * n + dy
        cells.add((cx, cy))
    return frozenset(cells)


def cell_digits(cell, n: int, k: int) -> tuple:
    """Decompose a level-k cell into its k digit coordinates."""
    cx, cy = cell
    digits = []
    for j in range(k - 1, -1, -1):
        digits.append(((cx // n**j) % n, (cy // n**j) % n))
    return tuple(digits)
