# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled search core.

Mirrors ``_searchpure`` exactly: same candidate order, same pruning,
same node accounting, identical witnesses.  Limited to 64 vertices by
the mask width; the dispatcher falls back to the pure backend above
that.
"""

import time

from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

BACKEND_NAME = "compiled"

FOUND = 0
NONE = 1
ABORTED = 2

cdef long long _STRIDE = 4096


cdef struct RainbowCtx:
    unsigned long long *flat
    long *offs
    long *lens
    long t
    long long nodes
    long long budget
    double deadline
    long *picks


cdef bint _rb_expired(RainbowCtx *ctx):
    if ctx.budget and ctx.nodes >= ctx.budget:
        return True
    if ctx.deadline != 0.0 and ctx.nodes % _STRIDE == 0:
        if time.monotonic() > ctx.deadline:
            return True
    return False


cdef bint _rb_starved(RainbowCtx *ctx, long level, unsigned long long occ):
    cdef long c, i
    cdef bint any_free
    for c in range(level, ctx.t):
        any_free = False
        for i in range(ctx.offs[c], ctx.offs[c] + ctx.lens[c]):
            if not (ctx.flat[i] & occ):
                any_free = True
                break
        if not any_free:
            return True
    return False


cdef int _rb_search(RainbowCtx *ctx, long level, unsigned long long occ):
    # 1 found, 0 exhausted, -1 aborted
    cdef long idx, base
    cdef unsigned long long m, occ2
    cdef int r
    if level == ctx.t:
        return 1
    base = ctx.offs[level]
    for idx in range(ctx.lens[level]):
        ctx.nodes += 1
        if _rb_expired(ctx):
            return -1
        m = ctx.flat[base + idx]
        if m & occ:
            continue
        occ2 = occ | m
        if level + 1 < ctx.t and _rb_starved(ctx, level + 1, occ2):
            continue
        ctx.picks[level] = idx
        r = _rb_search(ctx, level + 1, occ2)
        if r != 0:
            return r
    return 0


def rainbow_search(color_masks, long long node_budget=0, double deadline=0.0):
    cdef long t = len(color_masks)
    cdef list lists = [list(one) for one in color_masks]
    for one in lists:
        if not one:
            return (NONE, None, 0)
    if t == 0:
        return (FOUND, [], 0)

    cdef long n_flat = 0
    cdef long c
    for c in range(t):
        n_flat += len(lists[c])

    cdef RainbowCtx ctx
    ctx.t = t
    ctx.nodes = 0
    ctx.budget = node_budget
    ctx.deadline = deadline
    ctx.flat = <unsigned long long *> malloc(
        max(n_flat, 1) * sizeof(unsigned long long))
    ctx.offs = <long *> malloc(t * sizeof(long))
    ctx.lens = <long *> malloc(t * sizeof(long))
    ctx.picks = <long *> malloc(t * sizeof(long))
    if not (ctx.flat and ctx.offs and ctx.lens and ctx.picks):
        free(ctx.flat); free(ctx.offs); free(ctx.lens); free(ctx.picks)
        raise MemoryError
    cdef long pos = 0
    cdef int r
    try:
        for c in range(t):
            ctx.offs[c] = pos
            ctx.lens[c] = len(lists[c])
            for m_obj in lists[c]:
                ctx.flat[pos] = <unsigned long long> m_obj
                pos += 1
        r = _rb_search(&ctx, 0, 0)
        if r == 1:
            return (FOUND, [ctx.picks[c] for c in range(t)], ctx.nodes)
        if r == 0:
            return (NONE, None, ctx.nodes)
        return (ABORTED, None, ctx.nodes)
    finally:
        free(ctx.flat); free(ctx.offs); free(ctx.lens); free(ctx.picks)


cdef struct CoverCtx:
    unsigned long long *masks
    long m_count
    long n_vertices
    unsigned long long full
    long *vert_flat     # candidate edge ids grouped by vertex
    long *vert_offs
    long *vert_lens
    long long nodes
    long long budget
    double deadline
    long *picks
    long depth


cdef bint _cv_expired(CoverCtx *ctx):
    if ctx.budget and ctx.nodes >= ctx.budget:
        return True
    if ctx.deadline != 0.0 and ctx.nodes % _STRIDE == 0:
        if time.monotonic() > ctx.deadline:
            return True
    return False


cdef int _cv_search(CoverCtx *ctx, unsigned long long occ):
    # 1 found, 0 exhausted, -1 aborted
    cdef long v, i, j, pivot, count
    cdef long pivot_count = -1
    cdef unsigned long long m
    cdef int r
    if occ == ctx.full:
        return 1
    pivot = -1
    for v in range(ctx.n_vertices):
        if (occ >> v) & 1:
            continue
        count = 0
        for j in range(ctx.vert_offs[v], ctx.vert_offs[v] + ctx.vert_lens[v]):
            if not (ctx.masks[ctx.vert_flat[j]] & occ):
                count += 1
                if pivot_count != -1 and count >= pivot_count:
                    break
        if count == 0:
            return 0
        if pivot_count == -1 or count < pivot_count:
            pivot = v
            pivot_count = count
    for j in range(ctx.vert_offs[pivot], ctx.vert_offs[pivot] + ctx.vert_lens[pivot]):
        i = ctx.vert_flat[j]
        m = ctx.masks[i]
        if m & occ:
            continue
        ctx.nodes += 1
        if _cv_expired(ctx):
            return -1
        ctx.picks[ctx.depth] = i
        ctx.depth += 1
        r = _cv_search(ctx, occ | m)
        if r != 0:
            return r
        ctx.depth -= 1
    return 0


def exact_cover(masks, long n_vertices, long long node_budget=0,
                double deadline=0.0):
    cdef long m_count = len(masks)
    cdef CoverCtx ctx
    ctx.m_count = m_count
    ctx.n_vertices = n_vertices
    ctx.full = ((<unsigned long long> 1) << n_vertices) - 1 \
        if n_vertices < 64 else <unsigned long long> 0xFFFFFFFFFFFFFFFF
    ctx.nodes = 0
    ctx.budget = node_budget
    ctx.deadline = deadline
    ctx.depth = 0

    cdef long total = 0
    cdef long i, v
    cdef unsigned long long m
    ctx.masks = <unsigned long long *> malloc(
        max(m_count, 1) * sizeof(unsigned long long))
    if not ctx.masks:
        raise MemoryError
    for i, m_obj in enumerate(masks):
        ctx.masks[i] = <unsigned long long> m_obj
        total += __builtin_popcountll(ctx.masks[i])

    ctx.vert_offs = <long *> malloc(max(n_vertices, 1) * sizeof(long))
    ctx.vert_lens = <long *> malloc(max(n_vertices, 1) * sizeof(long))
    ctx.vert_flat = <long *> malloc(max(total, 1) * sizeof(long))
    ctx.picks = <long *> malloc(max(n_vertices, 1) * sizeof(long))
    if not (ctx.vert_offs and ctx.vert_lens and ctx.vert_flat and ctx.picks):
        free(ctx.masks); free(ctx.vert_offs); free(ctx.vert_lens)
        free(ctx.vert_flat); free(ctx.picks)
        raise MemoryError
    cdef int r
    cdef long pos = 0
    try:
        for v in range(n_vertices):
            ctx.vert_lens[v] = 0
        for i in range(m_count):
            m = ctx.masks[i]
            for v in range(n_vertices):
                if (m >> v) & 1:
                    ctx.vert_lens[v] += 1
        pos = 0
        for v in range(n_vertices):
            ctx.vert_offs[v] = pos
            pos += ctx.vert_lens[v]
            ctx.vert_lens[v] = 0
        for i in range(m_count):
            m = ctx.masks[i]
            for v in range(n_vertices):
                if (m >> v) & 1:
                    ctx.vert_flat[ctx.vert_offs[v] + ctx.vert_lens[v]] = i
                    ctx.vert_lens[v] += 1
        r = _cv_search(&ctx, 0)
        if r == 1:
            return (FOUND, [ctx.picks[i] for i in range(ctx.depth)], ctx.nodes)
        if r == 0:
            return (NONE, None, ctx.nodes)
        return (ABORTED, None, ctx.nodes)
    finally:
        free(ctx.masks); free(ctx.vert_offs); free(ctx.vert_lens)
        free(ctx.vert_flat); free(ctx.picks)


cdef struct MaxCtx:
    unsigned long long *masks
    long m_count
    long k
    unsigned long long all_vertices
    long long nodes
    long long budget
    double deadline
    long *best
    long best_len
    long *cur
    long cur_len


cdef bint _max_expired(MaxCtx *ctx):
    if ctx.budget and ctx.nodes >= ctx.budget:
        return True
    if ctx.deadline != 0.0 and ctx.nodes % _STRIDE == 0:
        if time.monotonic() > ctx.deadline:
            return True
    return False


cdef int _max_go(MaxCtx *ctx, long start, unsigned long long occ):
    cdef long j
    cdef unsigned long long m
    cdef int r
    if (ctx.cur_len
            + __builtin_popcountll(ctx.all_vertices & ~occ) // ctx.k
            <= ctx.best_len):
        return 0
    for j in range(start, ctx.m_count):
        if ctx.cur_len + (ctx.m_count - j) <= ctx.best_len:
            break
        ctx.nodes += 1
        if _max_expired(ctx):
            return -1
        m = ctx.masks[j]
        if m & occ:
            continue
        ctx.cur[ctx.cur_len] = j
        ctx.cur_len += 1
        if ctx.cur_len > ctx.best_len:
            memcpy(ctx.best, ctx.cur, ctx.cur_len * sizeof(long))
            ctx.best_len = ctx.cur_len
        r = _max_go(ctx, j + 1, occ | m)
        ctx.cur_len -= 1
        if r != 0:
            return r
    return 0


def max_disjoint_edges(masks, long k, long n_vertices,
                       long long node_budget=0, double deadline=0.0):
    cdef long m_count = len(masks)
    cdef MaxCtx ctx
    ctx.m_count = m_count
    ctx.k = k
    ctx.all_vertices = ((<unsigned long long> 1) << n_vertices) - 1 \
        if n_vertices < 64 else <unsigned long long> 0xFFFFFFFFFFFFFFFF
    ctx.nodes = 0
    ctx.budget = node_budget
    ctx.deadline = deadline
    ctx.best_len = 0
    ctx.cur_len = 0
    ctx.masks = <unsigned long long *> malloc(
        max(m_count, 1) * sizeof(unsigned long long))
    ctx.best = <long *> malloc(max(m_count, 1) * sizeof(long))
    ctx.cur = <long *> malloc(max(m_count, 1) * sizeof(long))
    if not (ctx.masks and ctx.best and ctx.cur):
        free(ctx.masks); free(ctx.best); free(ctx.cur)
        raise MemoryError
    cdef long j
    cdef int r
    try:
        for j, m_obj in enumerate(masks):
            ctx.masks[j] = <unsigned long long> m_obj
        r = _max_go(&ctx, 0, 0)
        picks = [ctx.best[j] for j in range(ctx.best_len)]
        if r == 0:
            return (FOUND, picks, ctx.nodes)
        return (ABORTED, picks, ctx.nodes)
    finally:
        free(ctx.masks); free(ctx.best); free(ctx.cur)
