"""Exact longest-path oracle over intersection graphs.

Two independent routes compute the optimum on every call site that matters: a
subset dynamic program and an exhaustive backtracking enumeration.  The
kernels exist twice — ``arcgallai._core`` (compiled) when the extension built,
``arcgallai._core_py`` otherwise — selected here at import.  Set
``ARCGALLAI_BACKEND=pure`` to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from . import _core_py
from .chains import Chain, CoverTrace, cover_trace, validate_chain
from .errors import InternalError, TooLarge
from .family import Cover, IntersectionGraph

if os.environ.get("ARCGALLAI_BACKEND", "") == "pure":
    _kernel = _core_py
else:
    try:
        from . import _core as _kernel  # type: ignore[no-redef]
    except ImportError:
        _kernel = _core_py

BACKEND = "compiled" if getattr(_kernel, "COMPILED", False) else "pure-python"

DEFAULT_BOUND = 16
DEFAULT_CAP = 10**6

__all__ = [
    "BACKEND",
    "DEFAULT_BOUND",
    "DEFAULT_CAP",
    "LongestPathResult",
    "TracedEnumeration",
    "longest_path_length",
    "enumerate_longest",
    "enumerate_with_traces",
    "select_min_cover_longest",
]


@dataclass(frozen=True)
class LongestPathResult:
    """All longest paths of a graph, deduplicated under reversal.

    `paths` may be truncated at the enumeration cap; `count` and
    `common_vertices` stay exact regardless.
    """

    length: int
    paths: tuple[tuple[int, ...], ...]
    count: int
    common_vertices: frozenset[int]
    cap_exceeded: bool
    graph: IntersectionGraph = field(repr=False)


@dataclass(frozen=True)
class TracedEnumeration:
    """Enumeration plus exact cover-trace aggregates for one cover."""

    result: LongestPathResult
    trace_masks: frozenset[int]
    min_trace_mask: int
    min_trace_path: tuple[int, ...]


def _check_bound(graph: IntersectionGraph, bound: int):
    if graph.n > bound:
        raise TooLarge(f"{graph.n} vertices exceeds the exact-oracle bound {bound}")


def longest_path_length(graph: IntersectionGraph, bound: int = DEFAULT_BOUND) -> int:
    """Route 1: subset DP."""
    _check_bound(graph, bound)
    return _kernel.longest_path_length(list(graph.adj), graph.n)


def _mask_to_set(mask: int) -> frozenset[int]:
    out = set()
    while mask:
        low = mask & -mask
        out.add(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def enumerate_longest(
    graph: IntersectionGraph, cap: int = DEFAULT_CAP, bound: int = DEFAULT_BOUND
) -> LongestPathResult:
    """Route 2: exhaustive backtracking enumeration of all longest paths."""
    _check_bound(graph, bound)
    length, count, common, paths, truncated, _, _, _ = _kernel.enumerate_longest(
        list(graph.adj), graph.n, cap
    )
    return LongestPathResult(
        length, tuple(paths), count, _mask_to_set(common), truncated, graph
    )


def _cover_positions(graph: IntersectionGraph, cover: Cover) -> list[int]:
    positions = [-1] * graph.n
    for slot, idx in enumerate(cover.indices):
        positions[idx] = slot
    return positions


def enumerate_with_traces(
    graph: IntersectionGraph,
    cover: Cover,
    cap: int = DEFAULT_CAP,
    bound: int = DEFAULT_BOUND,
) -> TracedEnumeration:
    _check_bound(graph, bound)
    length, count, common, paths, truncated, traces, best_trace, best_path = (
        _kernel.enumerate_longest(
            list(graph.adj), graph.n, cap, _cover_positions(graph, cover), cover.n
        )
    )
    if best_path is None or best_trace is None:
        raise InternalError("traced enumeration returned no argmin path")
    result = LongestPathResult(
        length, tuple(paths), count, _mask_to_set(common), truncated, graph
    )
    return TracedEnumeration(result, frozenset(traces), best_trace, tuple(best_path))


def path_trace_mask(path, positions) -> int:
    mask = 0
    for v in path:
        if positions[v] >= 0:
            mask |= 1 << positions[v]
    return mask


def select_min_cover_longest(
    result: LongestPathResult, cover: Cover
) -> tuple[Chain, CoverTrace]:
    """A longest path minimizing the number of cover arcs on it.

    Ties break lexicographically over canonical paths.  When the path list
    was truncated, a second exact sweep recomputes the argmin.
    """
    positions = _cover_positions(result.graph, cover)
    if not result.cap_exceeded:
        best = min(
            result.paths,
            key=lambda p: (path_trace_mask(p, positions).bit_count(), p),
        )
    else:
        _, _, _, _, _, _, _, best = _kernel.enumerate_longest(
            list(result.graph.adj), result.graph.n, 0, positions, cover.n
        )
        if best is None:
            raise InternalError("argmin sweep returned nothing")
    chain = validate_chain(best, cover.family)
    return chain, cover_trace(chain, cover)
