"""Exact geometry of points, open arcs and regions on a discrete circle.

Positions live on a circle with ``T`` integer ticks and are represented as
`fractions.Fraction` values normalized into ``[0, T)``; clockwise means
increasing position modulo ``T``.  An arc is an OPEN point set:
``Arc.proper(c, l, r)`` is everything strictly between ``l`` and ``r`` in
clockwise direction, never the endpoints themselves, and ``Arc.full(c)`` is
the whole circle (no proper open arc can cover it).

A ``Region`` is a finite union of disjoint components, each an interval with
explicit open/closed ends, kept maximally merged and in canonical clockwise
order (starting from the smallest start position), so structural equality is
set equality.  Two conventions cover the degenerate shapes: a component with
``start == end`` and both ends closed is the single point, and with both
ends open it is the whole circle minus that point.

Every boolean combination is computed by exact cell decomposition: the
boundary points of all operands split the circle into points and open cells,
membership is constant on each cell and probed at the rational midpoint.
There is no epsilon logic anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InternalError, MixedCircles

__all__ = [
    "Circle",
    "Arc",
    "Component",
    "Region",
    "clockwise_between",
    "arc_contains_point",
    "arc_intersect",
    "arc_contains_arc",
    "closed_span",
    "region_union",
    "region_intersect",
    "region_subtract",
    "region_contains",
    "region_is_connected",
    "sweep_point",
]


@dataclass(frozen=True, order=True)
class Circle:
    ticks: int

    def __post_init__(self):
        if self.ticks < 2:
            raise ValueError(f"circle needs at least 2 ticks, got {self.ticks}")

    def point(self, value) -> Fraction:
        """Normalize a position into [0, ticks)."""
        return Fraction(value) % self.ticks

    def offset(self, a: Fraction, b: Fraction) -> Fraction:
        """Clockwise distance from a to b, in [0, ticks)."""
        return (b - a) % self.ticks

    def midpoint(self, a: Fraction, b: Fraction) -> Fraction:
        """Midpoint of the clockwise arc from a to b (halfway around for a == b)."""
        gap = self.offset(a, b)
        if gap == 0:
            gap = Fraction(self.ticks)
        return (a + gap / 2) % self.ticks


def clockwise_between(circle: Circle, a, x, b) -> bool:
    """True iff x lies strictly inside the open clockwise arc from a to b.

    Positions must already be normalized into [0, ticks); then the wrap case
    reduces to plain comparisons.
    """
    if a == b:
        raise ValueError("clockwise_between needs a != b")
    if a < b:
        return a < x < b
    return x > a or x < b


@dataclass(frozen=True)
class Arc:
    """Open arc on a circle: proper with two distinct endpoints, or the full circle."""

    circle: Circle
    left: Fraction | None
    right: Fraction | None

    def __post_init__(self):
        if (self.left is None) != (self.right is None):
            raise ValueError("arc endpoints must both be set or both be None")
        if self.left is not None:
            object.__setattr__(self, "left", self.circle.point(self.left))
            object.__setattr__(self, "right", self.circle.point(self.right))
            if self.left == self.right:
                raise ValueError("proper arc needs distinct endpoints")

    @classmethod
    def proper(cls, circle: Circle, left, right) -> "Arc":
        return cls(circle, Fraction(left), Fraction(right))

    @classmethod
    def full(cls, circle: Circle) -> "Arc":
        return cls(circle, None, None)

    @property
    def is_full(self) -> bool:
        return self.left is None

    def contains(self, x) -> bool:
        if self.is_full:
            return True
        left, right = self.left, self.right
        if left < right:
            return left < x < right
        return x > left or x < right

    def region(self) -> "Region":
        cached = self.__dict__.get("_region")
        if cached is None:
            if self.is_full:
                cached = Region.full(self.circle)
            else:
                cached = Region(self.circle, (Component(self.left, self.right, False, False),))
            self.__dict__["_region"] = cached
        return cached

    def __str__(self):
        if self.is_full:
            return "full"
        return f"({self.left},{self.right})"


def arc_contains_point(arc: Arc, x) -> bool:
    return arc.contains(x)


@dataclass(frozen=True)
class Component:
    """One connected piece of a region, with explicit end closures."""

    start: Fraction
    end: Fraction
    closed_start: bool
    closed_end: bool

    def contains(self, circle: Circle, x) -> bool:
        start, end = self.start, self.end
        if start == end:
            if self.closed_start:  # single point
                return x == start
            return x != start  # full circle minus the point
        if x == start:
            return self.closed_start
        if x == end:
            return self.closed_end
        if start < end:
            return start < x < end
        return x > start or x < end

    def __str__(self):
        if self.start == self.end:
            return f"[{self.start}]" if self.closed_start else f"C-[{self.start}]"
        lb = "[" if self.closed_start else "("
        rb = "]" if self.closed_end else ")"
        return f"{lb}{self.start},{self.end}{rb}"


@dataclass(frozen=True)
class Region:
    """Canonical finite union of disjoint, maximally merged components."""

    circle: Circle
    components: tuple[Component, ...] = ()
    is_full: bool = False

    @classmethod
    def empty(cls, circle: Circle) -> "Region":
        return cls(circle, ())

    @classmethod
    def full(cls, circle: Circle) -> "Region":
        return cls(circle, (), True)

    @property
    def is_empty(self) -> bool:
        return not self.is_full and not self.components

    @property
    def is_connected(self) -> bool:
        """True for zero or one components (the full circle is connected)."""
        return self.is_full or len(self.components) <= 1

    def contains_point(self, x) -> bool:
        if self.is_full:
            return True
        return any(c.contains(self.circle, x) for c in self.components)

    def contains(self, other: "Region") -> bool:
        return region_subtract(other, self).is_empty

    def __str__(self):
        if self.is_full:
            return "full"
        if not self.components:
            return "empty"
        return "+".join(str(c) for c in self.components)


def _check_same_circle(regions: Sequence[Region]) -> Circle:
    circle = regions[0].circle
    for r in regions[1:]:
        if r.circle != circle:
            raise MixedCircles(f"operands on {circle} vs {r.circle}")
    return circle


def _combine(regions: Sequence[Region], keep) -> Region:
    """Boolean combination with exact open/closed semantics via cell decomposition."""
    circle = _check_same_circle(regions)
    bounds = sorted({p for r in regions for c in r.components for p in (c.start, c.end)})
    if not bounds:
        # every operand is constant (full or empty) over the whole circle
        value = keep(tuple(r.is_full for r in regions))
        return Region.full(circle) if value else Region.empty(circle)

    k = len(bounds)
    items = []  # (kind, payload, included) in clockwise order
    for i, b in enumerate(bounds):
        items.append(("point", b, keep(tuple(r.contains_point(b) for r in regions))))
        nxt = bounds[(i + 1) % k]
        mid = circle.midpoint(b, nxt)
        items.append(("cell", (b, nxt), keep(tuple(r.contains_point(mid) for r in regions))))

    included = [it[2] for it in items]
    if all(included):
        return Region.full(circle)
    if not any(included):
        return Region.empty(circle)

    # walk cyclically starting just after some excluded item, so runs never wrap
    total = len(items)
    start = included.index(False)
    comps = []
    run: list = []
    for step in range(1, total + 1):
        it = items[(start + step) % total]
        if it[2]:
            run.append(it)
        elif run:
            comps.append(_run_to_component(run))
            run = []
    if run:
        comps.append(_run_to_component(run))
    comps.sort(key=lambda c: c.start)
    return Region(circle, tuple(comps))


def _run_to_component(run) -> Component:
    kind0, pay0, _ = run[0]
    kind1, pay1, _ = run[-1]
    if kind0 == "point":
        start, closed_start = pay0, True
    else:
        start, closed_start = pay0[0], False
    if kind1 == "point":
        end, closed_end = pay1, True
    else:
        end, closed_end = pay1[1], False
    if start == end and closed_start != closed_end:
        raise InternalError("half-closed degenerate component")
    return Component(start, end, closed_start, closed_end)


def region_union(first: Region, *rest: Region) -> Region:
    return _combine((first, *rest), any)


def region_intersect(first: Region, *rest: Region) -> Region:
    return _combine((first, *rest), all)


def region_subtract(a: Region, b: Region) -> Region:
    """Exact difference; subtraction keeps closure-aware boundary points."""
    return _combine((a, b), lambda m: m[0] and not m[1])


def region_contains(outer: Region, inner: Region) -> bool:
    return outer.contains(inner)


def region_is_connected(r: Region) -> bool:
    return r.is_connected


def arc_intersect(a: Arc, b: Arc) -> Region:
    """Open-set intersection; two proper arcs can meet in 0, 1 or 2 components."""
    return region_intersect(a.region(), b.region())


def arc_contains_arc(a: Arc, b: Arc) -> bool:
    """Set inclusion of open arcs (reflexive)."""
    if a.is_full:
        return True
    if b.is_full:
        return False
    return a.region().contains(b.region())


def closed_span(circle: Circle, x, y) -> Region:
    """The CLOSED clockwise arc [x, y]; boundary points count for subset tests."""
    x = circle.point(x)
    y = circle.point(y)
    if x == y:
        raise ValueError("closed_span needs x != y")
    return Region(circle, (Component(x, y, True, True),))


def sweep_point(region: Region, used: Iterable = ()) -> Fraction:
    """First free point of the form tick + odd/2**j, smallest j first, then clockwise.

    Deterministic and total on nonempty open sets: any such set contains a
    dyadic offset point for large enough j.
    """
    if region.is_empty:
        raise InternalError("sweep_point on empty region")
    used = set(used)
    ticks = region.circle.ticks
    for j in range(1, 41):
        denom = 1 << j
        for tick in range(ticks):
            for num in range(1, denom, 2):
                x = tick + Fraction(num, denom)
                if x in used:
                    continue
                if region.contains_point(x):
                    return x
    raise InternalError("sweep_point exhausted dyadic levels")
