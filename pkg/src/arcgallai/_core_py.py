"""Pure-Python kernels for the exact longest-path oracle.

Same contract as the compiled `_core` extension; `pathsolver` picks whichever
is available.  Two independent routes live here on purpose: a subset dynamic
program for the optimum length, and an exhaustive backtracking enumeration —
they cross-check each other on every instance.
"""

from __future__ import annotations

COMPILED = False

MAX_VERTICES = 20
MAX_COVER = 16


def longest_path_length(adj, n: int) -> int:
    """Maximum vertex count of a simple path, by DP over (vertex set, endpoint)."""
    if not 1 <= n <= MAX_VERTICES:
        raise ValueError(f"kernel supports 1..{MAX_VERTICES} vertices, got {n}")
    size = 1 << n
    ends = [0] * size
    for v in range(n):
        ends[1 << v] = 1 << v
    best = 1
    for mask in range(1, size):
        e = ends[mask]
        if not e:
            continue
        bits = mask.bit_count()
        if bits > best:
            best = bits
        while e:
            low = e & -e
            e ^= low
            v = low.bit_length() - 1
            ext = adj[v] & ~mask
            while ext:
                lowu = ext & -ext
                ext ^= lowu
                ends[mask | lowu] |= lowu
    return best


def enumerate_longest(adj, n: int, cap: int, positions=None, ncover: int = 0):
    """Backtracking over all simple paths; exact accumulators survive truncation.

    Returns (length, count, common_mask, paths, truncated,
             traces, best_trace, best_path) where paths holds the first `cap`
    canonical longest paths (lexicographically smaller of a sequence and its
    reverse) in lexicographic order.  With `positions` (vertex -> cover slot,
    -1 for none) it also reports every distinct cover-trace bitmask and the
    path minimizing (popcount(trace), lexicographic order).
    """
    if not 1 <= n <= MAX_VERTICES:
        raise ValueError(f"kernel supports 1..{MAX_VERTICES} vertices, got {n}")
    have_tr = positions is not None
    if have_tr and not 1 <= ncover <= MAX_COVER:
        raise ValueError(f"cover slots must be 1..{MAX_COVER}, got {ncover}")
    full_mask = (1 << n) - 1
    tracebit = [0] * n
    if have_tr:
        for v in range(n):
            if positions[v] >= 0:
                tracebit[v] = 1 << positions[v]

    state = {
        "best_len": 0,
        "count": 0,
        "common": full_mask,
        "truncated": False,
        "best_pc": 0,
        "best_trace": -1,
        "best_path": None,
    }
    paths: list[tuple[int, ...]] = []
    seen = bytearray(1 << ncover) if have_tr else None
    path: list[int] = []

    def visit(v: int, mask: int, trace: int):
        path.append(v)
        length = len(path)
        if length > state["best_len"]:
            state["best_len"] = length
            state["count"] = 0
            state["common"] = full_mask
            state["truncated"] = False
            paths.clear()
            if have_tr:
                seen[:] = bytes(len(seen))
                state["best_trace"] = -1
                state["best_path"] = None
        if length == state["best_len"]:
            canonical = True
            for i in range(length):
                a, b = path[i], path[length - 1 - i]
                if a < b:
                    break
                if a > b:
                    canonical = False
                    break
            if canonical:
                state["count"] += 1
                state["common"] &= mask
                if len(paths) < cap:
                    paths.append(tuple(path))
                else:
                    state["truncated"] = True
                if have_tr:
                    seen[trace] = 1
                    pc = trace.bit_count()
                    best = state["best_path"]
                    if (
                        best is None
                        or pc < state["best_pc"]
                        or (pc == state["best_pc"] and tuple(path) < best)
                    ):
                        state["best_pc"] = pc
                        state["best_trace"] = trace
                        state["best_path"] = tuple(path)
        ext = adj[v] & ~mask
        while ext:
            low = ext & -ext
            ext ^= low
            u = low.bit_length() - 1
            visit(u, mask | low, trace | tracebit[u])
        path.pop()

    for s in range(n):
        visit(s, 1 << s, tracebit[s])

    traces = None
    best_trace = None
    if have_tr:
        traces = [t for t in range(1 << ncover) if seen[t]]
        best_trace = state["best_trace"] if state["best_trace"] >= 0 else None
    return (
        state["best_len"],
        state["count"],
        state["common"],
        paths,
        state["truncated"],
        traces,
        best_trace,
        state["best_path"],
    )
