"""Arc families: generation, instance files, intersection graphs, circle covers.

A family is an indexed sequence of open arcs on one circle; index = vertex id
of the intersection graph.  All endpoints of proper arcs are pairwise
distinct integer ticks, which keeps every predicate in this module exact and
tie-free.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import GenerationExhausted, InternalError, NotCovering, ParseError
from .geometry import (
    Arc,
    Circle,
    Region,
    arc_contains_arc,
    region_union,
)

__all__ = [
    "ArcFamily",
    "IntersectionGraph",
    "Cover",
    "arcs_overlap",
    "build_graph",
    "is_connected",
    "covers_circle",
    "minimal_cover",
    "delta_k",
    "generate",
    "parse_instance",
    "format_instance",
]


@dataclass(frozen=True)
class ArcFamily:
    circle: Circle
    arcs: tuple[Arc, ...]

    def __post_init__(self):
        if not self.arcs:
            raise ValueError("family needs at least one arc")
        seen = set()
        fulls = 0
        for arc in self.arcs:
            if arc.circle != self.circle:
                raise ValueError("arc on a different circle")
            if arc.is_full:
                fulls += 1
                continue
            for p in (arc.left, arc.right):
                if p.denominator != 1:
                    raise ValueError(f"family endpoints must be integer ticks, got {p}")
                if p in seen:
                    raise ValueError(f"duplicate endpoint {p}")
                seen.add(p)
        if fulls > 1:
            raise ValueError("duplicate full-circle arcs")

    @property
    def m(self) -> int:
        return len(self.arcs)


def parse_instance(text: str):
    """Parse the plain-text instance format; returns (family, chain tuples)."""
    circle = None
    arcs: list[Arc] = []
    chains: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "circle":
                if circle is not None:
                    raise ParseError(f"line {lineno}: duplicate circle statement")
                circle = Circle(int(parts[1]))
            elif parts[0] == "arc":
                if circle is None:
                    raise ParseError(f"line {lineno}: arc before circle")
                if parts[1:] == ["full"]:
                    arcs.append(Arc.full(circle))
                else:
                    left, right = int(parts[1]), int(parts[2])
                    if not (0 <= left < circle.ticks and 0 <= right < circle.ticks):
                        raise ParseError(f"line {lineno}: endpoint out of [0, {circle.ticks})")
                    arcs.append(Arc.proper(circle, left, right))
            elif parts[0] == "chain":
                chains.append(tuple(int(p) for p in parts[1:]))
            else:
                raise ParseError(f"line {lineno}: unknown statement {parts[0]!r}")
        except (ValueError, IndexError) as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    if circle is None or not arcs:
        raise ParseError("instance needs a circle statement and at least one arc")
    try:
        family = ArcFamily(circle, tuple(arcs))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    for seq in chains:
        for idx in seq:
            if not 0 <= idx < family.m:
                raise ParseError(f"chain index {idx} out of range")
    return family, tuple(chains)


def format_instance(family: ArcFamily, chains=()) -> str:
    lines = [f"circle {family.circle.ticks}"]
    for arc in family.arcs:
        if arc.is_full:
            lines.append("arc full")
        else:
            lines.append(f"arc {arc.left} {arc.right}")
    for seq in chains:
        lines.append("chain " + " ".join(str(i) for i in seq))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class IntersectionGraph:
    """Symmetric irreflexive adjacency over arc indices, stored as bitmasks."""

    n: int
    adj: tuple[int, ...]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int):
        mask = self.adj[v]
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def edges(self):
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    yield (u, v)


def arcs_overlap(a: Arc, b: Arc) -> bool:
    """Nonempty open intersection; assumes the family's distinct-endpoint invariant."""
    if a.is_full or b.is_full:
        return True
    return a.contains(b.left) or b.contains(a.left)


def build_graph(family: ArcFamily) -> IntersectionGraph:
    m = family.m
    adj = [0] * m
    for u in range(m):
        for v in range(u + 1, m):
            if arcs_overlap(family.arcs[u], family.arcs[v]):
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return IntersectionGraph(m, tuple(adj))


def is_connected(graph: IntersectionGraph) -> bool:
    seen = 1
    stack = [0]
    while stack:
        v = stack.pop()
        fresh = graph.adj[v] & ~seen
        seen |= fresh
        while fresh:
            low = fresh & -fresh
            stack.append(low.bit_length() - 1)
            fresh ^= low
    return seen == (1 << graph.n) - 1


def covers_circle(family: ArcFamily) -> bool:
    return region_union(*(arc.region() for arc in family.arcs)).is_full


@dataclass(frozen=True)
class Cover:
    """Cyclically ordered minimum cover; indices point into the family."""

    family: ArcFamily
    indices: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.indices)

    def arc(self, i: int) -> Arc:
        return self.family.arcs[self.indices[i % self.n]]

    def delta(self, i: int) -> Region:
        return delta_k(self, i)


def _greedy_cover_from(family: ArcFamily, seed: int):
    """Extend clockwise from the seed arc, always taking the farthest reach.

    Returns the chosen index list, or None if the frontier point is ever
    uncovered (cannot happen for covering families).
    """
    circle = family.circle
    ticks = circle.ticks
    arcs = family.arcs
    chosen = [seed]
    chosen_set = {seed}
    extent = circle.offset(arcs[seed].left, arcs[seed].right)
    frontier = arcs[seed].right
    while extent <= ticks:
        best = None
        best_gain = None
        for j, arc in enumerate(arcs):
            if j in chosen_set or arc.is_full or not arc.contains(frontier):
                continue
            gain = circle.offset(frontier, arc.right)
            if best is None or gain > best_gain:
                best, best_gain = j, gain
            elif gain == best_gain:
                raise InternalError("tied reach contradicts distinct endpoints")
        if best is None:
            return None
        chosen.append(best)
        chosen_set.add(best)
        extent += best_gain
        frontier = arcs[best].right
        if len(chosen) > family.m:
            raise InternalError("greedy cover failed to terminate")
    return chosen


def _canonical_cycle(family: ArcFamily, indices) -> tuple[int, ...]:
    return tuple(sorted(indices, key=lambda i: family.arcs[i].left))


def _enforce_no_containment(family: ArcFamily, indices) -> tuple[int, ...]:
    """While some cover arc sits strictly inside another arc, lift it to a maximal one."""
    current = list(indices)
    for _ in range(family.m * family.m + 1):
        replaced = False
        for pos, ki in enumerate(current):
            karc = family.arcs[ki]
            ups = [
                j
                for j, a in enumerate(family.arcs)
                if j != ki and arc_contains_arc(a, karc)
            ]
            if not ups:
                continue
            maximal = [
                j
                for j in ups
                if not any(
                    j2 != j and arc_contains_arc(family.arcs[j2], family.arcs[j])
                    for j2 in ups
                )
            ]
            current[pos] = min(maximal if maximal else ups)
            replaced = True
            break
        if not replaced:
            break
    else:
        raise InternalError("containment normalization did not terminate")
    if len(set(current)) != len(current):
        raise InternalError("containment normalization produced duplicate cover arcs")
    return _canonical_cycle(family, current)


def minimal_cover(family: ArcFamily) -> Cover:
    """Minimum-size cover in cyclic clockwise order, no member inside another arc.

    Greedy farthest-reach extension from every seed arc; the exhaustive subset
    oracle in the test suite confirms minimality at desk scale.
    """
    if not covers_circle(family):
        raise NotCovering("family does not cover the circle")
    fulls = [i for i, a in enumerate(family.arcs) if a.is_full]
    if fulls:
        return Cover(family, (min(fulls),))
    best = None
    for seed in range(family.m):
        chosen = _greedy_cover_from(family, seed)
        if chosen is None:
            continue
        canon = _canonical_cycle(family, chosen)
        key = (len(canon), canon)
        if best is None or key < best:
            best = key
    if best is None:
        raise InternalError("covering family but greedy found no cover")
    indices = _enforce_no_containment(family, best[1])
    if len(indices) != best[0]:
        raise InternalError("containment normalization changed the cover size")
    return Cover(family, indices)


def delta_k(cover: Cover, i: int) -> Region:
    """The open arc from l(K_{i+1}) to r(K_i); one lens component when n = 2."""
    if cover.n < 2:
        raise ValueError("delta is undefined for covers of size < 2")
    k_i = cover.arc(i)
    k_next = cover.arc(i + 1)
    return Arc.proper(cover.family.circle, k_next.left, k_i.right).region()


def generate(
    m: int,
    ticks: int,
    seed: int,
    require_cover: bool = False,
    require_connected: bool = False,
    max_attempts: int = 10_000,
) -> ArcFamily:
    """Seeded random family: 2m distinct ticks paired into arcs by a shuffle.

    Rejection-samples until the requested flags hold; deterministic per seed.
    """
    if m < 1:
        raise ValueError("need at least one arc")
    if ticks < 2 * m:
        raise ValueError(f"need ticks >= 2m for distinct endpoints, got {ticks} < {2 * m}")
    circle = Circle(ticks)
    rng = random.Random(seed)
    for _ in range(max_attempts):
        endpoints = sorted(rng.sample(range(ticks), 2 * m))
        rng.shuffle(endpoints)
        arcs = tuple(
            Arc.proper(circle, endpoints[2 * i], endpoints[2 * i + 1]) for i in range(m)
        )
        family = ArcFamily(circle, arcs)
        if require_cover and not covers_circle(family):
            continue
        if require_connected and not is_connected(build_graph(family)):
            continue
        return family
    raise GenerationExhausted(
        f"no admissible family in {max_attempts} attempts (m={m}, ticks={ticks}, seed={seed})"
    )
