# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the exact longest-path oracle.

Same contract and identical outputs (including path order) as `_core_py`;
`pathsolver` prefers this module when the extension built.
"""

from libc.stdlib cimport calloc, free, malloc
from libc.string cimport memset

COMPILED = True

MAX_VERTICES = 20
MAX_COVER = 16

cdef extern from *:
    int __builtin_popcount(unsigned int x)
    int __builtin_ctz(unsigned int x)


cdef struct EnumState:
    int n
    unsigned int full_mask
    unsigned int* adj
    unsigned int* tracebit
    int have_tr
    unsigned char* seen
    size_t seen_size
    long cap
    int best_len
    long long count
    unsigned int common
    int truncated
    int depth
    int* path
    int* best_path
    int best_pc
    long best_trace
    int have_best


def longest_path_length(adj, int n):
    """Maximum vertex count of a simple path, by DP over (vertex set, endpoint)."""
    if n < 1 or n > MAX_VERTICES:
        raise ValueError(f"kernel supports 1..{MAX_VERTICES} vertices, got {n}")
    cdef size_t size = (<size_t>1) << n
    cdef unsigned int* ends = <unsigned int*>calloc(size, sizeof(unsigned int))
    cdef unsigned int* cadj = <unsigned int*>malloc(n * sizeof(unsigned int))
    if ends == NULL or cadj == NULL:
        free(ends); free(cadj)
        raise MemoryError()
    cdef int v, best, bits
    cdef unsigned int mask, e, ext, low
    try:
        for v in range(n):
            cadj[v] = adj[v]
            ends[(<size_t>1) << v] = (<unsigned int>1) << v
        best = 1
        for mask in range(1, <unsigned int>size):
            e = ends[mask]
            if e == 0:
                continue
            bits = __builtin_popcount(mask)
            if bits > best:
                best = bits
            while e:
                low = e & (0 - e)
                e ^= low
                v = __builtin_ctz(low)
                ext = cadj[v] & ~mask
                while ext:
                    low = ext & (0 - ext)
                    ext ^= low
                    ends[mask | low] |= low
        return best
    finally:
        free(ends)
        free(cadj)


cdef void _visit(EnumState* st, list paths, int v, unsigned int mask, long trace) except *:
    cdef int length, i, a, b, canonical, pc, better
    cdef unsigned int ext, low
    st.path[st.depth] = v
    st.depth += 1
    length = st.depth
    if length > st.best_len:
        st.best_len = length
        st.count = 0
        st.common = st.full_mask
        st.truncated = 0
        paths.clear()
        if st.have_tr:
            memset(st.seen, 0, st.seen_size)
            st.have_best = 0
            st.best_trace = -1
    if length == st.best_len:
        canonical = 1
        for i in range(length):
            a = st.path[i]
            b = st.path[length - 1 - i]
            if a < b:
                break
            if a > b:
                canonical = 0
                break
        if canonical:
            st.count += 1
            st.common &= mask
            if <long>len(paths) < st.cap:
                paths.append(tuple([st.path[i] for i in range(length)]))
            else:
                st.truncated = 1
            if st.have_tr:
                st.seen[trace] = 1
                pc = __builtin_popcount(<unsigned int>trace)
                if not st.have_best:
                    better = 1
                elif pc < st.best_pc:
                    better = 1
                elif pc > st.best_pc:
                    better = 0
                else:
                    better = 0
                    for i in range(length):
                        if st.path[i] < st.best_path[i]:
                            better = 1
                            break
                        if st.path[i] > st.best_path[i]:
                            break
                if better:
                    st.best_pc = pc
                    st.best_trace = trace
                    st.have_best = 1
                    for i in range(length):
                        st.best_path[i] = st.path[i]
    ext = st.adj[v] & ~mask
    while ext:
        low = ext & (0 - ext)
        ext ^= low
        i = __builtin_ctz(low)
        _visit(st, paths, i, mask | low, trace | st.tracebit[i])
    st.depth -= 1


def enumerate_longest(adj, int n, long cap, positions=None, int ncover=0):
    """Backtracking over all simple paths; exact accumulators survive truncation.

    See `_core_py.enumerate_longest` for the full contract.
    """
    if n < 1 or n > MAX_VERTICES:
        raise ValueError(f"kernel supports 1..{MAX_VERTICES} vertices, got {n}")
    cdef int have_tr = positions is not None
    if have_tr and (ncover < 1 or ncover > MAX_COVER):
        raise ValueError(f"cover slots must be 1..{MAX_COVER}, got {ncover}")

    cdef EnumState st
    st.n = n
    st.full_mask = ((<unsigned int>1) << n) - 1
    st.have_tr = have_tr
    st.cap = cap
    st.best_len = 0
    st.count = 0
    st.common = st.full_mask
    st.truncated = 0
    st.depth = 0
    st.best_pc = 0
    st.best_trace = -1
    st.have_best = 0
    st.seen = NULL
    st.seen_size = 0

    st.adj = <unsigned int*>malloc(n * sizeof(unsigned int))
    st.tracebit = <unsigned int*>calloc(n, sizeof(unsigned int))
    st.path = <int*>malloc(n * sizeof(int))
    st.best_path = <int*>malloc(n * sizeof(int))
    if st.adj == NULL or st.tracebit == NULL or st.path == NULL or st.best_path == NULL:
        free(st.adj); free(st.tracebit); free(st.path); free(st.best_path)
        raise MemoryError()
    cdef int v
    cdef long t
    paths = []
    try:
        for v in range(n):
            st.adj[v] = adj[v]
        if have_tr:
            st.seen_size = (<size_t>1) << ncover
            st.seen = <unsigned char*>calloc(st.seen_size, 1)
            if st.seen == NULL:
                raise MemoryError()
            for v in range(n):
                if positions[v] >= 0:
                    st.tracebit[v] = (<unsigned int>1) << (<int>positions[v])
        for v in range(n):
            _visit(&st, paths, v, (<unsigned int>1) << v, st.tracebit[v])
        traces = None
        best_trace = None
        best_path = None
        if have_tr:
            traces = [t for t in range(<long>st.seen_size) if st.seen[t]]
            if st.have_best:
                best_trace = st.best_trace
                best_path = tuple([st.best_path[v] for v in range(st.best_len)])
        return (
            st.best_len,
            st.count,
            st.common,
            paths,
            bool(st.truncated),
            traces,
            best_trace,
            best_path,
        )
    finally:
        free(st.adj)
        free(st.tracebit)
        free(st.path)
        free(st.best_path)
        if st.seen != NULL:
            free(st.seen)
