"""Point assignments, sorted reordering, the swap calculus and canonicalization.

Positions in this module are 1-based throughout: a chain (J_1, ..., J_t)
carries points x_1, ..., x_{t+1} with x_k, x_{k+1} in J_k.  After
`keil_reorder` the points are consecutive clockwise starting from the cut,
and `canonicalize` runs two swap phases that push every offending arc to the
compliant side of its pivot cover arc.  Each swap is legality-checked against
the closed-span criterion, and the structural effects the procedure relies on
(set bookkeeping after a pairing swap, strict descent of the window potential,
monotone window bounds) are asserted on every step; a violation aborts into
the report as a counterexample payload rather than crashing the harness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .chains import Chain, CoverTrace, support, validate_chain
from .errors import (
    AssignmentFailed,
    ClaimViolation,
    InternalError,
    NoPermutationFound,
    PivotMissing,
    PreconditionViolated,
    SwapIllegal,
)
from .family import ArcFamily, Cover, delta_k
from .geometry import (
    Region,
    arc_intersect,
    closed_span,
    region_subtract,
    region_union,
    sweep_point,
)

__all__ = [
    "PointAssignment",
    "PhaseState",
    "SwapStep",
    "CanonicalReport",
    "assign_points",
    "assign_points_unanchored",
    "keil_reorder",
    "can_swap",
    "swap",
    "phase1_sets",
    "check_properties",
    "canonicalize",
]


@dataclass(frozen=True)
class PointAssignment:
    """Distinct points x_1..x_{t+1} plus the cut used to linearize the circle."""

    points: tuple[Fraction, ...]
    cut: Fraction | None


def _point_regions(chain: Chain, family: ArcFamily):
    """Required open region for each point: J_1, then J_k n J_{k+1}, then J_t."""
    arcs = [family.arcs[i] for i in chain.arcs]
    regions = [arcs[0].region()]
    for k in range(chain.t - 1):
        regions.append(arc_intersect(arcs[k], arcs[k + 1]))
    regions.append(arcs[-1].region())
    return regions


def _pick_points(regions, forbidden: Region | None):
    used: set[Fraction] = set()
    points = []
    for k, base in enumerate(regions, 1):
        allowed = base if forbidden is None else region_subtract(base, forbidden)
        if allowed.is_empty:
            raise AssignmentFailed(f"no admissible point for position {k}")
        x = sweep_point(allowed, used)
        used.add(x)
        points.append(x)
    return tuple(points)


def assign_points(
    chain: Chain, family: ArcFamily, cover: Cover, trace: CoverTrace
) -> PointAssignment:
    """Points inside the consecutive intersections, away from K_a and K_b.

    The cut is the midpoint of K_a, which a certified-longest chain's support
    cannot touch; that is re-checked here and failure is a bug signal.
    """
    if not trace.proper:
        raise PreconditionViolated("point assignment needs a proper cover trace")
    k_a = cover.arc(trace.a)
    k_b = cover.arc(trace.b)
    forbidden = region_union(k_a.region(), k_b.region())
    points = _pick_points(_point_regions(chain, family), forbidden)
    for x in points:
        if forbidden.contains_point(x):
            raise InternalError("assigned point landed in a forbidden cover arc")
    if k_a.is_full:
        raise InternalError("boundary cover arc cannot be the full circle")
    cut = family.circle.midpoint(k_a.left, k_a.right)
    if support(chain, family).contains_point(cut):
        raise AssignmentFailed("cut point lies in the support; chain is not admissible")
    return PointAssignment(points, cut)


def assign_points_unanchored(chain: Chain, family: ArcFamily) -> PointAssignment:
    """Points only, no cut; enough for swap probes on arbitrary chains."""
    return PointAssignment(_pick_points(_point_regions(chain, family), None), None)


def validate_assignment(chain: Chain, family: ArcFamily, pa: PointAssignment) -> None:
    if len(pa.points) != chain.t + 1:
        raise PreconditionViolated("assignment size does not match the chain")
    if len(set(pa.points)) != len(pa.points):
        raise PreconditionViolated("assignment points are not distinct")
    for k in range(chain.t):
        arc = family.arcs[chain.arcs[k]]
        if not (arc.contains(pa.points[k]) and arc.contains(pa.points[k + 1])):
            raise PreconditionViolated(f"x_{k + 1}, x_{k + 2} not both in J_{k + 1}")


def _sorted_points(circle, pa: PointAssignment):
    return tuple(sorted(pa.points, key=lambda p: circle.offset(pa.cut, p)))


def keil_reorder(
    chain: Chain,
    family: ArcFamily,
    pa: PointAssignment,
    preference: str = "earliest",
    defer=frozenset(),
) -> tuple[Chain, PointAssignment]:
    """Permute the chain so the k-th arc holds the k-th and (k+1)-st sorted point.

    Greedy over positions, taking the unused candidate with the earliest
    effective reach among the sorted points (ties by clockwise right endpoint
    from the cut, then original position); exhaustive backtracking over the
    same candidate order is the fallback.  ``preference="latest"`` inverts the
    greedy order, and arc indices in ``defer`` are always tried last — both
    yield legal but adversarial permutations that exercise the swap phases.
    Total failure is never a valid outcome.
    """
    if pa.cut is None:
        raise PreconditionViolated("keil_reorder needs an anchored assignment (cut)")
    if preference not in ("earliest", "latest"):
        raise ValueError(f"unknown preference {preference!r}")
    validate_assignment(chain, family, pa)
    circle = family.circle
    t = chain.t
    pts = _sorted_points(circle, pa)

    far = Fraction(circle.ticks + 1)
    keys = {}
    contains = {}
    for j in range(1, t + 1):
        arc_index = chain.arcs[j - 1]
        arc = family.arcs[arc_index]
        held = tuple(k for k in range(1, t + 2) if arc.contains(pts[k - 1]))
        if not held:
            raise NoPermutationFound(f"arc at position {j} holds no sorted point")
        reach = max(held)
        tail = far if arc.is_full else circle.offset(pa.cut, arc.right)
        if preference == "latest":
            keys[j] = (arc_index in defer, -reach, -tail, j)
        else:
            keys[j] = (arc_index in defer, reach, tail, j)
        contains[j] = set(held)

    cands = {}
    for k in range(1, t + 1):
        pool = [j for j in range(1, t + 1) if k in contains[j] and k + 1 in contains[j]]
        pool.sort(key=keys.get)
        if not pool:
            raise NoPermutationFound(f"no arc holds sorted points {k}, {k + 1}")
        cands[k] = pool

    perm = _greedy_match(cands, t)
    if perm is None:
        perm = _backtrack_match(cands, t)
    if perm is None:
        raise NoPermutationFound("no permutation matches the sorted points")

    new_chain = validate_chain(tuple(chain.arcs[perm[k] - 1] for k in range(1, t + 1)), family)
    out = PointAssignment(pts, pa.cut)
    validate_assignment(new_chain, family, out)
    return new_chain, out


def _greedy_match(cands, t):
    used = set()
    perm = {}
    for k in range(1, t + 1):
        pick = next((j for j in cands[k] if j not in used), None)
        if pick is None:
            return None
        used.add(pick)
        perm[k] = pick
    return perm


def _backtrack_match(cands, t):
    used = set()
    perm = {}

    def go(k):
        if k > t:
            return True
        for j in cands[k]:
            if j in used:
                continue
            used.add(j)
            perm[k] = j
            if go(k + 1):
                return True
            used.remove(j)
        return False

    return perm if go(1) else None


def can_swap(chain: Chain, family: ArcFamily, pa: PointAssignment, p: int, q: int) -> bool:
    """True iff [x_p, x_{p+1}] and [x_q, x_{q+1}] both sit inside J_p n J_q."""
    if not (1 <= p < q <= chain.t):
        raise ValueError(f"need 1 <= p < q <= t, got p={p}, q={q}, t={chain.t}")
    circle = family.circle
    inter = arc_intersect(family.arcs[chain.arcs[p - 1]], family.arcs[chain.arcs[q - 1]])
    span_p = closed_span(circle, pa.points[p - 1], pa.points[p])
    span_q = closed_span(circle, pa.points[q - 1], pa.points[q])
    return inter.contains(span_p) and inter.contains(span_q)


def swap(chain: Chain, family: ArcFamily, pa: PointAssignment, p: int, q: int) -> Chain:
    """Exchange positions p and q; the points stay put and stay valid."""
    if not can_swap(chain, family, pa, p, q):
        raise SwapIllegal(f"closed spans do not both fit J_{p} n J_{q}")
    arcs = list(chain.arcs)
    arcs[p - 1], arcs[q - 1] = arcs[q - 1], arcs[p - 1]
    out = validate_chain(tuple(arcs), family)
    validate_assignment(out, family, pa)
    return out


@dataclass(frozen=True)
class PhaseState:
    """Pivot position plus the violator position sets and their window potential."""

    gamma: int
    L: frozenset[int]
    R: frozenset[int]
    f: int

    @property
    def alpha(self) -> int:
        return min({self.gamma} | self.L | self.R)

    @property
    def beta(self) -> int:
        return max({self.gamma} | self.L | self.R)


def _make_state(gamma: int, L, R) -> PhaseState:
    L, R = frozenset(L), frozenset(R)
    window = {gamma} | L | R
    f = max(window) - min(window)
    if (f == 0) != (not L and not R):
        raise InternalError("potential is zero iff the violator sets are empty")
    if R and L and max(R) >= min(L):
        raise InternalError("predecessor violators must precede successor violators")
    return PhaseState(gamma, L, R, f)


def _pivot_position(chain: Chain, arc_index: int) -> int:
    try:
        return chain.arcs.index(arc_index) + 1
    except ValueError:
        raise PivotMissing(f"cover arc {arc_index} is not on the chain") from None


def _phase_predicates(family: ArcFamily, cover: Cover, pivot_slot: int, mode: str):
    """(successor violator, predecessor violator) region predicates per phase."""
    n = cover.n
    if mode == "phase1":
        a = (pivot_slot - 1) % n
        d_a = delta_k(cover, a)
        d_a1 = delta_k(cover, a + 1)
        union = region_union(cover.arc(a).region(), cover.arc(a + 1).region())

        def succ(region):  # K_{a+1} precedes A and delta K_a inside A
            return region.contains(d_a)

        if n >= 3:

            def pred(region):  # A precedes K_{a+1} and A escapes K_a u K_{a+1}
                return not union.contains(region)

        else:

            def pred(region):  # n = 2: removing delta K_{a+1} disconnects A
                return not region_subtract(region, d_a1).is_connected

        return succ, pred

    b = (pivot_slot + 1) % n
    d_b1 = delta_k(cover, pivot_slot)
    d_b = delta_k(cover, b)
    union = region_union(cover.arc(pivot_slot).region(), cover.arc(b).region())
    lens = arc_intersect(cover.arc(pivot_slot), cover.arc(b))

    if mode == "phase2":

        def succ(region):  # mirror of phase 1: A escapes K_{b-1} u K_b / splits
            return not (union.contains(region) and region_subtract(region, d_b).is_connected)

        def pred(region):  # delta K_{b-1} inside A
            return region.contains(d_b1)

        return succ, pred

    if mode == "phase2-verbatim":

        def succ(region):  # literal reading: A not inside delta K_{b-1}
            return not d_b1.contains(region)

        def pred(region):  # literal reading: K_{b-1} n K_b inside A
            return region.contains(lens)

        return succ, pred

    raise ValueError(f"unknown phase mode {mode!r}")


def _phase_sets(chain: Chain, family: ArcFamily, cover: Cover, pivot_slot: int, mode: str) -> PhaseState:
    succ, pred = _phase_predicates(family, cover, pivot_slot, mode)
    gamma = _pivot_position(chain, cover.indices[pivot_slot % cover.n])
    L, R = set(), set()
    for k in range(1, chain.t + 1):
        if k == gamma:
            continue
        region = family.arcs[chain.arcs[k - 1]].region()
        if k > gamma and succ(region):
            L.add(k)
        elif k < gamma and pred(region):
            R.add(k)
    return _make_state(gamma, L, R)


def phase1_sets(
    chain: Chain, family: ArcFamily, pa: PointAssignment, cover: Cover, a: int, b: int
) -> PhaseState:
    """Violator sets around the pivot K_{a+1}; pa is carried for the swaps only."""
    del pa, b
    return _phase_sets(chain, family, cover, (a + 1) % cover.n, "phase1")


@dataclass(frozen=True)
class SwapStep:
    rule: str
    p: int
    q: int
    f_before: int
    f_after: int


@dataclass
class CanonicalReport:
    """Literal evaluation of conditions (a)-(e) plus the reordering trail."""

    a: int
    b: int
    pos_a1: int
    pos_b1: int
    flags: dict
    witnesses: dict
    steps: tuple = ()
    phase2_divergence: tuple | None = None
    aborted: str | None = None

    @property
    def all_ok(self) -> bool:
        return self.aborted is None and all(self.flags.values())


def check_properties(chain: Chain, family: ArcFamily, cover: Cover, a: int, b: int) -> CanonicalReport:
    n = cover.n
    idx_a1 = cover.indices[(a + 1) % n]
    idx_b1 = cover.indices[(b - 1) % n]
    pos_a1 = _pivot_position(chain, idx_a1)
    pos_b1 = _pivot_position(chain, idx_b1)

    d_a = delta_k(cover, a)
    d_a1 = delta_k(cover, a + 1)
    d_b1 = delta_k(cover, b - 1)
    d_b = delta_k(cover, b)
    union_a = region_union(cover.arc(a).region(), cover.arc(a + 1).region())
    union_b = region_union(cover.arc(b - 1).region(), cover.arc(b).region())

    flags = {}
    witnesses = {}

    def scan(flag, positions, bad):
        flags[flag] = True
        for k in positions:
            arc_index = chain.arcs[k - 1]
            if bad(family.arcs[arc_index].region()):
                flags[flag] = False
                witnesses[flag] = (arc_index, k)
                return

    if idx_a1 == idx_b1:
        flags["a"] = True
    else:
        flags["a"] = pos_a1 < pos_b1
        if not flags["a"]:
            witnesses["a"] = (idx_b1, pos_b1)

    scan("b", range(1, pos_b1), lambda r: r.contains(d_b1))
    scan(
        "c",
        range(1, pos_a1),
        lambda r: not (union_a.contains(r) and region_subtract(r, d_a1).is_connected),
    )
    scan(
        "d",
        range(pos_b1 + 1, chain.t + 1),
        lambda r: not (union_b.contains(r) and region_subtract(r, d_b).is_connected),
    )
    scan("e", range(pos_a1 + 1, chain.t + 1), lambda r: r.contains(d_a))

    return CanonicalReport((a % n), (b % n), pos_a1, pos_b1, flags, witnesses)


def _run_phase(chain, family, pa, sets_fn, steps, prefix):
    state = sets_fn(chain)
    guard = 0
    while state.L and state.R:
        guard += 1
        if guard > chain.t + 1:
            raise InternalError("pairing loop did not terminate")
        p, q = min(state.R), max(state.L)
        f_before = state.f
        chain = swap(chain, family, pa, p, q)
        new_state = sets_fn(chain)
        steps.append(SwapStep(prefix + "claim1", p, q, f_before, new_state.f))
        if new_state.L != state.L - {q} or new_state.R != state.R - {p}:
            raise ClaimViolation(f"{prefix}claim1 set effect violated by swap ({p},{q})")
        if new_state.f > state.f:
            raise ClaimViolation(f"{prefix}claim1 increased the potential")
        if new_state.alpha < state.alpha or new_state.beta > state.beta:
            raise ClaimViolation(f"{prefix}claim1 widened the window")
        state = new_state

    if state.L or state.R:
        bound = state.beta - state.alpha
        for _ in range(bound + 1):
            if not (state.L or state.R):
                break
            f_before = state.f
            if state.L:
                if state.gamma != state.alpha:
                    raise ClaimViolation(f"{prefix}pivot not leftmost in the L-only case")
                p, q, rule = state.gamma, max(state.L), "claim3"
            else:
                if state.gamma != state.beta:
                    raise ClaimViolation(f"{prefix}pivot not rightmost in the R-only case")
                p, q, rule = min(state.R), state.gamma, "claim2"
            chain = swap(chain, family, pa, p, q)
            new_state = sets_fn(chain)
            steps.append(SwapStep(prefix + rule, p, q, f_before, new_state.f))
            if new_state.f >= f_before:
                raise ClaimViolation(f"{prefix}{rule} did not strictly decrease the potential")
            if new_state.alpha < state.alpha or new_state.beta > state.beta:
                raise ClaimViolation(f"{prefix}{rule} widened the window")
            state = new_state
        if state.L or state.R:
            raise ClaimViolation(f"{prefix}pivot loop exceeded its descent bound")
    return chain


def canonicalize(
    chain: Chain,
    family: ArcFamily,
    cover: Cover,
    trace: CoverTrace,
    *,
    compare_phase2: bool = False,
    keil_preference: str = "earliest",
) -> tuple[Chain, CanonicalReport]:
    """Reorder a longest chain with a proper trace until (a)-(e) all hold.

    Performs the point assignment and sorted reordering internally, then
    phase 1 around K_{a+1} (targets (c),(e)) and, when the pivots differ,
    phase 2 around K_{b-1} (targets (b),(d)).  Structural violations abort
    into the report; the final flags are always evaluated literally.
    """
    if not trace.proper:
        raise PreconditionViolated("canonicalize needs a proper, contiguous cover trace")
    a, b = trace.a, trace.b
    n = cover.n
    pa = assign_points(chain, family, cover, trace)
    defer = frozenset()
    if keil_preference == "defer-cover":
        keil_preference = "earliest"
        defer = frozenset(cover.indices)
    chain, pa = keil_reorder(chain, family, pa, preference=keil_preference, defer=defer)

    steps: list[SwapStep] = []
    divergence = None
    aborted = None
    try:
        sets1 = lambda ch: _phase_sets(ch, family, cover, (a + 1) % n, "phase1")
        chain = _run_phase(chain, family, pa, sets1, steps, "")
        mid = check_properties(chain, family, cover, a, b)
        if not (mid.flags["c"] and mid.flags["e"]):
            raise ClaimViolation("phase 1 ended with (c) or (e) still violated")
        if (a + 1) % n != (b - 1) % n:
            sets2 = lambda ch: _phase_sets(ch, family, cover, (b - 1) % n, "phase2")
            if compare_phase2:
                mirror = sets2(chain)
                verbatim = _phase_sets(chain, family, cover, (b - 1) % n, "phase2-verbatim")
                divergence = tuple(
                    sorted((mirror.L ^ verbatim.L) | (mirror.R ^ verbatim.R))
                )
            gamma1 = _pivot_position(chain, cover.indices[(a + 1) % n])
            opening = sets2(chain)
            if gamma1 >= opening.alpha:
                raise ClaimViolation("phase-1 pivot does not precede the phase-2 window")
            chain = _run_phase(chain, family, pa, sets2, steps, "phase2-")
            late = check_properties(chain, family, cover, a, b)
            if not (late.flags["c"] and late.flags["e"]):
                raise ClaimViolation("phase 2 disturbed conditions (c)/(e)")
    except (SwapIllegal, ClaimViolation) as exc:
        aborted = str(exc)

    report = check_properties(chain, family, cover, a, b)
    report.steps = tuple(steps)
    report.phase2_divergence = divergence
    report.aborted = aborted
    return chain, report
