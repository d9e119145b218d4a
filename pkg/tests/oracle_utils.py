"""Independent oracles used by the test suite.

Everything here is deliberately primitive — permutation sweeps, subset
enumeration, dense sampling — so the production code is checked against a
different route, not against itself.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations


def oracle_longest(adj, n):
    """(length, canonical longest paths, common vertex set) by permutation sweep."""
    best = 1
    found = set()
    for size in range(1, n + 1):
        hits = set()
        for perm in permutations(range(n), size):
            if all(adj[perm[i]] >> perm[i + 1] & 1 for i in range(size - 1)):
                hits.add(min(perm, perm[::-1]))
        if hits:
            best = size
            found = hits
    common = set(range(n))
    for path in found:
        common &= set(path)
    return best, sorted(found), common


def oracle_min_cover_size(family):
    """Smallest covering subset via exhaustive enumeration on the half-tick grid.

    Exact for integer-endpoint arcs: any uncovered set either contains a tick
    or an open gap between adjacent ticks, hence a half-tick.
    """
    ticks = family.circle.ticks
    samples = [Fraction(k, 2) for k in range(2 * ticks)]
    masks = []
    for arc in family.arcs:
        mask = 0
        for i, x in enumerate(samples):
            if arc.contains(x):
                mask |= 1 << i
        masks.append(mask)
    full = (1 << len(samples)) - 1
    for size in range(1, family.m + 1):
        for subset in combinations(range(family.m), size):
            acc = 0
            for j in subset:
                acc |= masks[j]
            if acc == full:
                return size
    return None


def region_matches_sampling(region, operands, combine, denominator):
    """Compare a computed region against dense sampling of the operand predicate."""
    ticks = region.circle.ticks
    for k in range(ticks * denominator):
        x = Fraction(k, denominator)
        expected = combine([op.contains_point(x) for op in operands])
        if region.contains_point(x) != expected:
            return False
    return True


def oracle_keil_match(chain, family, sorted_points, order_key):
    """Exhaustive matching over all permutations (t <= 8)."""
    t = chain.t
    holds = []
    for j in range(t):
        arc = family.arcs[chain.arcs[j]]
        holds.append({k for k in range(t + 1) if arc.contains(sorted_points[k])})
    indices = sorted(range(t), key=order_key)
    for perm in permutations(indices):
        if all(k in holds[perm[k]] and k + 1 in holds[perm[k]] for k in range(t)):
            return tuple(chain.arcs[j] for j in perm)
    return None
