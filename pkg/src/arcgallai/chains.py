"""Chains of arcs, their supports, the extension step and cover traces.

A chain is a tuple of distinct arc indices with consecutive arcs
intersecting; it is exactly a simple path in the intersection graph.  The
support is J_1 u (J_2 n J_3) u ... u (J_{t-2} n J_{t-1}) u J_t, read for
small t as J_1 u J_t (so the extension step below stays literally true: an
outside arc meeting the support always extends the chain by one).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalError, InvalidChainError
from .family import ArcFamily, Cover, arcs_overlap
from .geometry import Region, arc_intersect, region_intersect, region_union

__all__ = [
    "Chain",
    "CoverTrace",
    "validate_chain",
    "support",
    "try_extend",
    "longest_chain_membership_check",
    "membership_violations",
    "cover_trace",
]


@dataclass(frozen=True)
class Chain:
    arcs: tuple[int, ...]

    @property
    def t(self) -> int:
        return len(self.arcs)

    def __str__(self):
        return " ".join(str(i) for i in self.arcs)


def validate_chain(seq, family: ArcFamily) -> Chain:
    """Chain if distinctness and consecutive intersections hold; else pinpoints."""
    seq = tuple(seq)
    if not seq:
        raise InvalidChainError("empty", 0, ())
    seen = set()
    for k, idx in enumerate(seq, 1):
        if not 0 <= idx < family.m:
            raise InvalidChainError("range", k, (idx,))
        if idx in seen:
            raise InvalidChainError("duplicate", k, (idx,))
        seen.add(idx)
    for k in range(len(seq) - 1):
        if not arcs_overlap(family.arcs[seq[k]], family.arcs[seq[k + 1]]):
            raise InvalidChainError("gap", k + 1, (seq[k], seq[k + 1]))
    return Chain(seq)


def chain_error(seq, family: ArcFamily) -> str | None:
    try:
        validate_chain(seq, family)
    except InvalidChainError as exc:
        return str(exc)
    return None


def support(chain: Chain, family: ArcFamily) -> Region:
    arcs = chain.arcs
    t = chain.t
    parts = [family.arcs[arcs[0]].region(), family.arcs[arcs[-1]].region()]
    # middle terms J_i n J_{i+1} for 2 <= i <= t-2 (1-based)
    for k in range(1, t - 2):
        parts.append(arc_intersect(family.arcs[arcs[k]], family.arcs[arcs[k + 1]]))
    return region_union(*parts)


def try_extend(chain: Chain, family: ArcFamily) -> Chain | None:
    """One-step extension: any outside arc meeting the support joins the chain.

    Fast necessary condition for "longest"; the exact path oracle remains the
    ground truth.
    """
    supp = support(chain, family)
    members = set(chain.arcs)
    t = chain.t
    arcs = chain.arcs
    for idx in range(family.m):
        if idx in members:
            continue
        cand = family.arcs[idx]
        if region_intersect(cand.region(), supp).is_empty:
            continue
        if arcs_overlap(cand, family.arcs[arcs[0]]):
            return validate_chain((idx,) + arcs, family)
        for k in range(1, t - 2):
            gap = arc_intersect(family.arcs[arcs[k]], family.arcs[arcs[k + 1]])
            if not region_intersect(cand.region(), gap).is_empty:
                return validate_chain(arcs[: k + 1] + (idx,) + arcs[k + 1 :], family)
        if arcs_overlap(cand, family.arcs[arcs[-1]]):
            return validate_chain(arcs + (idx,), family)
        raise InternalError(f"arc {idx} meets the support but no placement applies")
    return None


def membership_violations(chain: Chain, family: ArcFamily) -> list[tuple[int, bool]]:
    """Arcs violating: on the chain iff the arc meets the support."""
    supp = support(chain, family)
    members = set(chain.arcs)
    out = []
    for idx in range(family.m):
        meets = not region_intersect(family.arcs[idx].region(), supp).is_empty
        if meets != (idx in members):
            out.append((idx, meets))
    return out


def longest_chain_membership_check(chain: Chain, family: ArcFamily) -> bool:
    """Must hold for every certified-longest chain; False is a bug report."""
    return not membership_violations(chain, family)


@dataclass(frozen=True)
class CoverTrace:
    """The set I of cover positions on a chain, with its contiguity bookkeeping.

    When I is proper and contiguous, a and b bound it: I = {a+1, ..., b-1}
    modulo n.  Violations are recorded, never repaired.
    """

    n: int
    members: frozenset[int]
    contiguous: bool
    a: int | None
    b: int | None

    @property
    def nonempty(self) -> bool:
        return bool(self.members)

    @property
    def is_full(self) -> bool:
        return len(self.members) == self.n

    @property
    def proper(self) -> bool:
        return self.nonempty and self.contiguous and not self.is_full


def cover_trace(chain: Chain, cover: Cover) -> CoverTrace:
    n = cover.n
    on_chain = set(chain.arcs)
    members = frozenset(i for i in range(n) if cover.indices[i] in on_chain)
    if not members or len(members) == n:
        return CoverTrace(n, members, True, None, None)
    breaks = [i for i in members if (i + 1) % n not in members]
    contiguous = len(breaks) == 1
    if not contiguous:
        return CoverTrace(n, members, False, None, None)
    end = breaks[0]
    starts = [i for i in members if (i - 1) % n not in members]
    if len(starts) != 1:
        raise InternalError("single break but multiple run starts")
    return CoverTrace(n, members, True, (starts[0] - 1) % n, (end + 1) % n)
